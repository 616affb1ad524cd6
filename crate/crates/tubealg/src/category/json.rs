//! JSON file format for category data (`schema_version` 1).
//!
//! ```json
//! {"schema_version": 1, "labels": ["0","e"], "unit": "0", "dual": {"0":"0","e":"e"},
//!  "fusion": [["0","0","0"], ...], "trivial_F": true}
//! ```
//!
//! Optional fields: `grading {elements, mult, sector}`, `qdim`, `trivial_F`,
//! `F [{a,b,c,d,e,f,re,im}]`. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CategorySpec, FiniteGroup, FusionCategory, Grading};
use crate::error::{Error, Result};
use crate::linalg::{c, C64};

/// Supported schema version.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryFile {
    schema_version: u64,
    labels: Vec<String>,
    unit: String,
    dual: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grading: Option<GradingFile>,
    fusion: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qdim: Option<BTreeMap<String, f64>>,
    #[serde(default, rename = "trivial_F", skip_serializing_if = "Option::is_none")]
    trivial_f: Option<bool>,
    #[serde(default, rename = "F", skip_serializing_if = "Option::is_none")]
    f: Option<Vec<FEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GradingFile {
    elements: Vec<String>,
    mult: Vec<Vec<String>>,
    sector: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FEntry {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
    re: f64,
    im: f64,
}

/// Parse category data from a JSON string.
pub fn from_json_str(text: &str) -> Result<FusionCategory> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::SchemaVersionMismatch(v)),
        None => return Err(Error::Parse("field `schema_version`: missing or not an integer".into())),
    }
    let file: CategoryFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    from_file(file)
}

fn from_file(file: CategoryFile) -> Result<FusionCategory> {
    let mut labels = file.labels;
    let unit_pos = labels
        .iter()
        .position(|l| *l == file.unit)
        .ok_or_else(|| Error::Parse(format!("field `unit`: `{}` is not a label", file.unit)))?;
    // The unit is stored at index 0 internally.
    let unit = labels.remove(unit_pos);
    labels.insert(0, unit);
    let n = labels.len();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::Parse(format!("field `labels`: duplicate label `{l}`")));
        }
    }
    let idx = |field: &str, name: &str| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::Parse(format!("field `{field}`: unknown label `{name}`")))
    };
    let mut dual = vec![usize::MAX; n];
    for (a, b) in &file.dual {
        dual[idx("dual", a)?] = idx("dual", b)?;
    }
    for a in 0..n {
        if dual[a] == usize::MAX {
            return Err(Error::Parse(format!("field `dual`: missing entry for `{}`", labels[a])));
        }
    }
    for a in 0..n {
        if dual[dual[a]] != a {
            return Err(Error::Parse(format!("field `dual`: map is not involutive at `{}`", labels[a])));
        }
    }
    let fusion = file
        .fusion
        .iter()
        .map(|[a, b, c]| Ok((idx("fusion", a)?, idx("fusion", b)?, idx("fusion", c)?)))
        .collect::<Result<Vec<_>>>()?;
    let qdim = match &file.qdim {
        None => None,
        Some(m) => {
            let mut q = vec![f64::NAN; n];
            for (a, v) in m {
                q[idx("qdim", a)?] = *v;
            }
            if let Some(a) = q.iter().position(|v| v.is_nan()) {
                return Err(Error::Parse(format!("field `qdim`: missing entry for `{}`", labels[a])));
            }
            Some(q)
        }
    };
    let mut f = Vec::new();
    for e in file.f.iter().flatten() {
        let k = [
            idx("F", &e.a)?,
            idx("F", &e.b)?,
            idx("F", &e.c)?,
            idx("F", &e.d)?,
            idx("F", &e.e)?,
            idx("F", &e.f)?,
        ];
        f.push((k, c(e.re, e.im)));
    }
    let grading = match file.grading {
        None => None,
        Some(g) => {
            let eidx = |name: &str| -> Result<usize> {
                g.elements
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| Error::Parse(format!("field `grading`: unknown group element `{name}`")))
            };
            let mult = g
                .mult
                .iter()
                .map(|row| row.iter().map(|x| eidx(x)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let group = FiniteGroup::new(g.elements.clone(), mult).map_err(|e| Error::Parse(format!("field `grading`: {e}")))?;
            let mut sector = vec![usize::MAX; n];
            for (a, s) in &g.sector {
                sector[idx("grading.sector", a)?] = eidx(s)?;
            }
            if let Some(a) = sector.iter().position(|&s| s == usize::MAX) {
                return Err(Error::Parse(format!("field `grading.sector`: missing entry for `{}`", labels[a])));
            }
            Some(Grading { group, sector })
        }
    };
    FusionCategory::from_spec(CategorySpec {
        labels,
        dual,
        fusion,
        qdim,
        f,
        trivial_f: file.trivial_f.unwrap_or(false),
        grading,
    })
}

/// Serialize category data to a pretty JSON string. All admissible F entries
/// are written explicitly unless they are all 1, in which case `trivial_F` is
/// set instead.
pub fn to_json_string(cat: &FusionCategory) -> String {
    let l = |a: usize| cat.label(a).to_string();
    let n = cat.rank();
    let mut fusion = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for &c in cat.fuse(a, b) {
                fusion.push([l(a), l(b), l(c)]);
            }
        }
    }
    let entries: Vec<([usize; 6], C64)> = cat
        .admissible_f_indices()
        .into_iter()
        .map(|k| (k, cat.f(k[0], k[1], k[2], k[3], k[4], k[5])))
        .collect();
    let all_one = entries.iter().all(|(_, v)| v.re == 1.0 && v.im == 0.0);
    let file = CategoryFile {
        schema_version: SCHEMA_VERSION,
        labels: cat.labels().to_vec(),
        unit: l(0),
        dual: (0..n).map(|a| (l(a), l(cat.dual(a)))).collect(),
        grading: cat.grading().map(|g| GradingFile {
            elements: g.group.names().to_vec(),
            mult: g.group.table().iter().map(|row| row.iter().map(|&x| g.group.name(x).to_string()).collect()).collect(),
            sector: (0..n).map(|a| (l(a), g.group.name(g.sector[a]).to_string())).collect(),
        }),
        fusion,
        qdim: Some((0..n).map(|a| (l(a), cat.d(a))).collect()),
        trivial_f: if all_one { Some(true) } else { None },
        f: if all_one {
            None
        } else {
            Some(
                entries
                    .into_iter()
                    .map(|([a, b, c, d, e, f], v)| FEntry {
                        a: l(a),
                        b: l(b),
                        c: l(c),
                        d: l(d),
                        e: l(e),
                        f: l(f),
                        re: v.re,
                        im: v.im,
                    })
                    .collect(),
            )
        },
    };
    serde_json::to_string_pretty(&file).expect("category serialization cannot fail")
}

/// Load category data from a file.
pub fn load(path: impl AsRef<Path>) -> Result<FusionCategory> {
    from_json_str(&std::fs::read_to_string(path)?)
}

/// Save category data to a file.
pub fn save(cat: &FusionCategory, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json_string(cat) + "\n")?;
    Ok(())
}
