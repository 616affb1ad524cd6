//! Serializable reports and their Markdown rendering.
//!
//! A [`TheoryReport`] carries provenance (source, seed, tolerance, phase
//! snapping) and one typed payload. It round-trips through JSON losslessly,
//! and [`TheoryReport::to_markdown`] reads nothing but the report itself, so
//! Markdown is a pure function of the JSON. Complex numbers are stored as
//! `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::category::{validate, FusionCategory};
use crate::condensation::{break_symmetry, CondensationReport};
use crate::defects::DefectTheory;
use crate::error::{Error, Result};
use crate::gauging::{certify_match, direct_double, gauge};
use crate::linalg::{pretty_complex, pretty_real, CMat, C64};
use crate::modular::{modular_data, ModularData};
use crate::spectra::decompose;
use crate::tubes::TubeAlgebra;

/// Default phase-snapping denominator for rendering (`e^{iπ p/q}`, `q ≤ 48`).
pub const SNAP_DENOMINATOR: u32 = 48;

/// A complex number as `[re, im]`.
pub type Cx = [f64; 2];

fn cx(z: C64) -> Cx {
    [z.re, z.im]
}

fn mat(m: &CMat) -> Vec<Vec<Cx>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| cx(m[(i, j)])).collect()).collect()
}

/// Where a report came from and how it was computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Subcommand.
    pub command: String,
    /// Fixture name or file path of each input.
    pub sources: Vec<String>,
    /// Random seed.
    pub seed: u64,
    /// Numerical tolerance.
    pub tol: f64,
    /// Phase-snapping denominator used by the Markdown renderer.
    pub snap_denominator: u32,
    /// Library version.
    pub version: String,
}

impl Provenance {
    /// Provenance for one run.
    pub fn new(command: &str, sources: Vec<String>, seed: u64, tol: f64, snap_denominator: u32) -> Self {
        Self {
            command: command.to_string(),
            sources,
            seed,
            tol,
            snap_denominator,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// One violated invariant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationRow {
    /// Kind of invariant.
    pub kind: String,
    /// Offending labels.
    pub indices: Vec<String>,
    /// Residual.
    pub residual: f64,
}

/// Result of category validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidatePayload {
    /// Whether the category passed.
    pub valid: bool,
    /// Number of objects.
    pub rank: usize,
    /// Largest pentagon residual.
    pub pentagon_max_residual: f64,
    /// Number of pentagon instances checked.
    pub pentagon_instances: usize,
    /// Violations.
    pub violations: Vec<ViolationRow>,
}

/// One block of a tube-algebra decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    /// Label.
    pub label: String,
    /// Sector name (graded decompositions only).
    pub sector: String,
    /// Block dimension.
    pub block_dim: usize,
    /// Quantum dimension.
    pub qdim: f64,
    /// Spin.
    pub twist: Cx,
}

/// Decomposition of a tube algebra into ICIs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPayload {
    /// `"full"` or `"dube sector <g>"`.
    pub algebra: String,
    /// Dimension of the algebra.
    pub dim: usize,
    /// Blocks.
    pub blocks: Vec<BlockRow>,
    /// `Σ_s d_s²` of the input category; coefficients are printed times this.
    pub normalization: f64,
    /// Names of the tubes with nonzero support.
    pub tubes: Vec<String>,
    /// ICI coefficients on those tubes (rows = blocks).
    pub coefficients: Vec<Vec<Cx>>,
    /// `Σ D_a²`.
    pub block_dim_sq: usize,
}

/// Modular data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularPayload {
    /// Labels.
    pub labels: Vec<String>,
    /// Quantum dimensions.
    pub d: Vec<f64>,
    /// Spins.
    pub theta: Vec<Cx>,
    /// Unitary S.
    pub s: Vec<Vec<Cx>>,
    /// `D_out`.
    pub total_dim: f64,
    /// Frobenius–Schur indicators.
    pub fs: Vec<f64>,
    /// Entanglement entropy corrections.
    pub gamma: Vec<f64>,
    /// Nonzero fusion rules `a × b = Σ N c`, for `a ≤ b`.
    pub fusion: Vec<String>,
    /// Named residuals.
    pub checks: Vec<(String, f64)>,
}

impl ModularPayload {
    /// Build from modular data.
    pub fn from_modular(m: &ModularData) -> Self {
        let c = m.checks();
        let k = m.len();
        let mut fusion = Vec::new();
        for a in 0..k {
            for b in a..k {
                let terms: Vec<String> = (0..k)
                    .filter(|&x| m.n[a][b][x] > 0)
                    .map(|x| if m.n[a][b][x] == 1 { m.labels[x].clone() } else { format!("{}{}", m.n[a][b][x], m.labels[x]) })
                    .collect();
                fusion.push(format!("{} × {} = {}", m.labels[a], m.labels[b], terms.join(" + ")));
            }
        }
        Self {
            labels: m.labels.clone(),
            d: m.d.clone(),
            theta: m.theta.iter().map(|&t| cx(t)).collect(),
            s: mat(&m.s),
            total_dim: m.total_dim,
            fs: m.kappa.clone(),
            gamma: m.gamma.clone(),
            fusion,
            checks: vec![
                ("unitarity".into(), c.unitarity),
                ("(ST)^3 = S^2".into(), c.st_cubed),
                ("S^4 = 1".into(), c.s_fourth),
                ("S^2 = C".into(), c.charge_conjugation),
                ("symmetry".into(), c.symmetry),
                ("vacuum row".into(), c.vacuum_row),
                ("Verlinde integrality".into(), m.verlinde_residual),
            ],
        }
    }
}

/// One defect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectRow {
    /// Label.
    pub label: String,
    /// Sector name.
    pub sector: String,
    /// Block dimension.
    pub block_dim: usize,
    /// Quantum dimension.
    pub qdim: f64,
    /// Spin.
    pub twist: Cx,
    /// `ρ_h(a)` for every group element `h`.
    pub images: Vec<String>,
    /// `η_a(h,h)` for `h` in the stabilizer: `(h, value)`.
    pub eta_squares: Vec<(String, Cx)>,
}

/// Symmetry-enriched theory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectsPayload {
    /// Group element names.
    pub group: Vec<String>,
    /// Defects.
    pub defects: Vec<DefectRow>,
    /// G-crossed keys `O^h_a` as strings.
    pub gcrossed_keys: Vec<String>,
    /// G-crossed S.
    pub gcrossed_s: Vec<Vec<Cx>>,
    /// G-crossed T (action matrix).
    pub gcrossed_t: Vec<Vec<Cx>>,
    /// Named residuals.
    pub checks: Vec<(String, f64)>,
}

/// One gauged anyon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugedRow {
    /// Label `[a,μ]`.
    pub label: String,
    /// Orbit representative.
    pub defect: String,
    /// Irrep dimension.
    pub irrep_dim: usize,
    /// Block dimension.
    pub block_dim: usize,
    /// Quantum dimension.
    pub qdim: f64,
    /// Spin.
    pub twist: Cx,
}

/// Gauged theory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugePayload {
    /// `|G|`.
    pub group_order: usize,
    /// Gauged anyons.
    pub anyons: Vec<GaugedRow>,
    /// Modular data of the gauged theory.
    pub modular: ModularPayload,
    /// Whether the gauged theory matches the directly computed double.
    pub morita_match: bool,
    /// Matched pairs `(gauged, direct)`.
    pub pairs: Vec<(String, String)>,
    /// Failure diagnostic.
    pub diagnostic: Option<String>,
    /// Twisted states `(defect, h, survives)`.
    pub twisted_states: Vec<(String, String, bool)>,
    /// Named residuals.
    pub checks: Vec<(String, f64)>,
}

/// One row of the condensation table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensationRow {
    /// Sector name.
    pub sector: String,
    /// Defect label.
    pub defect: String,
    /// Quantum dimension.
    pub qdim: f64,
    /// Spin of the defect.
    pub twist: Cx,
    /// Anyons of the double restricting onto the defect, with their `(d, θ)`.
    pub anyons: Vec<(String, f64, Cx)>,
}

/// Condensation (symmetry breaking) table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensePayload {
    /// Rows, trivial sector first.
    pub rows: Vec<CondensationRow>,
    /// Anyons condensing to the vacuum.
    pub condensed: Vec<String>,
    /// Confined defects.
    pub confined: Vec<String>,
    /// Identification classes of deconfined anyons.
    pub identifications: Vec<Vec<String>>,
    /// Anyons that split.
    pub split: Vec<String>,
    /// Whether regauging returns the double.
    pub roundtrip: bool,
    /// Named residuals.
    pub checks: Vec<(String, f64)>,
}

impl CondensePayload {
    /// Build from a condensation report.
    pub fn from_report(r: &CondensationReport, roundtrip: bool) -> Self {
        let lab = |a: usize| r.double.labels[a].clone();
        let mut order: Vec<usize> = (0..r.defects.len()).collect();
        order.sort_by_key(|&b| r.defects[b].sector);
        let rows = order
            .into_iter()
            .map(|b| {
                let d = &r.defects[b];
                CondensationRow {
                    sector: r.group.name(d.sector).to_string(),
                    defect: d.label.clone(),
                    qdim: d.qdim,
                    twist: cx(d.twist),
                    anyons: d.sources.iter().map(|&a| (lab(a), r.double.d[a], cx(r.double.theta[a]))).collect(),
                }
            })
            .collect();
        let res = &r.residuals;
        Self {
            rows,
            condensed: r.condensed_labels(),
            confined: r.confined_labels(),
            identifications: r.identification_classes.iter().map(|c| c.iter().map(|&a| lab(a)).collect()).collect(),
            split: r.split_anyons().into_iter().map(lab).collect(),
            roundtrip,
            checks: vec![
                ("defect decomposition".into(), res.decomposition),
                ("domain-wall expansion".into(), res.walls),
                ("splitting qdim".into(), res.splitting_qdim),
                ("condensed spins".into(), res.condensed_twist),
                ("condensed monodromy".into(), res.condensed_monodromy),
                ("unreached defects".into(), res.unreached_defects as f64),
            ],
        }
    }
}

/// Modular-data comparison of two inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparePayload {
    /// Ranks of the two doubles.
    pub ranks: (usize, usize),
    /// Whether a matching permutation exists.
    pub matched: bool,
    /// Matched pairs.
    pub pairs: Vec<(String, String)>,
    /// Failure diagnostic.
    pub diagnostic: Option<String>,
}

/// Report payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// `validate`.
    Validate(ValidatePayload),
    /// `spectrum`.
    Spectrum(SpectrumPayload),
    /// `modular`.
    Modular(ModularPayload),
    /// `defects`.
    Defects(DefectsPayload),
    /// `gauge`.
    Gauge(GaugePayload),
    /// `condense`.
    Condense(CondensePayload),
    /// `compare`.
    Compare(ComparePayload),
}

/// A complete report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    /// Provenance.
    pub provenance: Provenance,
    /// Payload.
    pub payload: Payload,
}

/// Validate category data.
pub fn validate_payload(cat: &FusionCategory, tol: f64) -> ValidatePayload {
    let r = validate(cat, tol);
    ValidatePayload {
        valid: r.is_valid(),
        rank: cat.rank(),
        pentagon_max_residual: r.pentagon_max_residual,
        pentagon_instances: r.pentagon_instances,
        violations: r
            .violations
            .iter()
            .map(|v| ViolationRow {
                kind: serde_json::to_value(v.kind).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default(),
                indices: v.indices.clone(),
                residual: v.residual,
            })
            .collect(),
    }
}

/// Decompose the full tube algebra, or the defect tube algebra of one sector.
pub fn spectrum_payload(cat: &FusionCategory, sector: Option<usize>, seed: u64, tol: f64) -> Result<SpectrumPayload> {
    let full = TubeAlgebra::build(cat, None);
    let (alg, dec, name) = match sector {
        None => {
            let dec = decompose(&full, None, seed, tol)?;
            (full, dec, "full".to_string())
        }
        Some(g) => {
            if g >= cat.num_sectors() {
                return Err(Error::Malformed(format!("sector {g} out of range")));
            }
            let dube = TubeAlgebra::build(cat, Some(0));
            let mut dec = decompose(&dube, Some(&full), seed, tol)?;
            dec.blocks.retain(|b| b.sector == g);
            let gname = cat.grading().map(|gr| gr.group.name(g).to_string()).unwrap_or_default();
            (dube, dec, format!("defect sector {gname}"))
        }
    };
    let group = cat.grading().map(|g| g.group.clone());
    let blocks: Vec<BlockRow> = dec
        .blocks
        .iter()
        .map(|b| BlockRow {
            label: b.label.clone(),
            sector: group.as_ref().map(|g| g.name(b.sector).to_string()).unwrap_or_default(),
            block_dim: b.dim,
            qdim: b.qdim,
            twist: cx(b.twist),
        })
        .collect();
    let support: Vec<usize> =
        (0..alg.dim()).filter(|&i| dec.blocks.iter().any(|b| b.idempotent[i].norm() > 1e-10)).collect();
    let normalization = cat.total_dim_sq();
    Ok(SpectrumPayload {
        algebra: name,
        dim: alg.dim(),
        block_dim_sq: blocks.iter().map(|b| b.block_dim * b.block_dim).sum(),
        blocks,
        normalization,
        tubes: support.iter().map(|&i| alg.tube_name(i)).collect(),
        coefficients: dec.blocks.iter().map(|b| support.iter().map(|&i| cx(b.idempotent[i])).collect()).collect(),
    })
}

/// Modular data of the double.
pub fn modular_payload(cat: &FusionCategory, seed: u64, tol: f64) -> Result<ModularPayload> {
    let full = TubeAlgebra::build(cat, None);
    let dec = decompose(&full, None, seed, tol)?;
    Ok(ModularPayload::from_modular(&modular_data(&full, &dec)?))
}

/// Defects, symmetry action, fractionalization and G-crossed data.
pub fn defects_payload(cat: &FusionCategory, seed: u64, tol: f64) -> Result<DefectsPayload> {
    let th = DefectTheory::build(cat, seed, tol)?;
    let gx = th.gcrossed();
    let g = &th.group;
    let labels = th.labels();
    let defects = (0..th.len())
        .map(|a| DefectRow {
            label: labels[a].clone(),
            sector: g.name(th.sector(a)).to_string(),
            block_dim: th.block_dim(a),
            qdim: th.qdim(a),
            twist: cx(th.dec.blocks[a].twist),
            images: (0..g.order()).map(|h| labels[th.rho[h][a]].clone()).collect(),
            eta_squares: th.stabilizer(a).into_iter().map(|h| (g.name(h).to_string(), cx(th.eta[a][h][h]))).collect(),
        })
        .collect();
    Ok(DefectsPayload {
        group: g.names().to_vec(),
        defects,
        gcrossed_keys: gx.keys.iter().map(|&(a, h)| format!("O^{}_{}", g.name(h), labels[a])).collect(),
        gcrossed_s: mat(&gx.s),
        gcrossed_t: mat(&gx.t),
        checks: vec![
            ("domain walls".into(), th.wall_residual),
            ("eta 2-cocycle".into(), th.eta_cocycle_residual()),
            ("spin constant on orbits".into(), th.theta_orbit_residual()),
            ("G-crossed S unitarity".into(), th.gcrossed_unitarity(&gx)),
            ("action violations".into(), th.action_violations() as f64),
        ],
    })
}

/// Gauge the grading group and compare with the direct double.
pub fn gauge_payload(cat: &FusionCategory, seed: u64, tol: f64) -> Result<GaugePayload> {
    let th = DefectTheory::build(cat, seed, tol)?;
    let gauged = gauge(&th, seed)?;
    let direct = direct_double(cat, seed, tol)?;
    let cert = certify_match(&gauged.modular, &direct, 1e-7);
    let r = &gauged.residuals;
    Ok(GaugePayload {
        group_order: gauged.group_order,
        anyons: gauged
            .anyons
            .iter()
            .map(|a| GaugedRow {
                label: a.label.clone(),
                defect: a.defect_label.clone(),
                irrep_dim: a.irrep_dim,
                block_dim: a.block_dim,
                qdim: a.qdim,
                twist: cx(a.twist),
            })
            .collect(),
        modular: ModularPayload::from_modular(&gauged.modular),
        morita_match: cert.matched,
        pairs: cert.pairs,
        diagnostic: cert.diagnostic,
        twisted_states: gauged.twisted_states.iter().map(|t| (t.defect.clone(), t.element.clone(), t.survives)).collect(),
        checks: vec![
            ("idempotents".into(), r.idempotent),
            ("centrality".into(), r.centrality),
            ("completeness".into(), r.completeness),
            ("wall expansion".into(), r.wall_expansion),
            ("S (G-crossed vs direct)".into(), r.s_direct),
            ("T formula".into(), r.twist_formula),
            ("qdim formula".into(), r.qdim_formula),
            ("projective characters".into(), r.irrep_orthogonality),
            ("block-dimension mismatches".into(), r.block_dim_mismatches as f64),
            ("Σ D² − dim".into(), (r.total_block_dim_sq as f64 - r.algebra_dim as f64).abs()),
        ],
    })
}

/// Break the grading symmetry and tabulate the result.
pub fn condense_payload(cat: &FusionCategory, seed: u64, tol: f64) -> Result<CondensePayload> {
    let report = break_symmetry(cat, seed, tol)?;
    let gauged = gauge(&report.theory, seed)?;
    let roundtrip = certify_match(&gauged.modular, &report.double, 1e-7).matched;
    Ok(CondensePayload::from_report(&report, roundtrip))
}

/// Compare the doubles of two categories.
pub fn compare_payload(a: &FusionCategory, b: &FusionCategory, seed: u64, tol: f64) -> Result<ComparePayload> {
    let ma = direct_double(a, seed, tol)?;
    let mb = direct_double(b, seed, tol)?;
    let cert = certify_match(&ma, &mb, 1e-7);
    Ok(ComparePayload { ranks: (ma.len(), mb.len()), matched: cert.matched, pairs: cert.pairs, diagnostic: cert.diagnostic })
}

impl TheoryReport {
    /// Pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Parse a JSON report.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Render as Markdown.
    pub fn to_markdown(&self) -> String {
        let p = &self.provenance;
        let fmt = Fmt { den: 2 * p.snap_denominator };
        let mut out = String::new();
        out.push_str(&format!("# tubealg {}: {}\n\n", p.command, p.sources.join(", ")));
        out.push_str(&format!("seed = {}, tol = {:e}\n\n", p.seed, p.tol));
        match &self.payload {
            Payload::Validate(v) => fmt.validate(&mut out, v),
            Payload::Spectrum(s) => fmt.spectrum(&mut out, s),
            Payload::Modular(m) => fmt.modular(&mut out, m),
            Payload::Defects(d) => fmt.defects(&mut out, d),
            Payload::Gauge(g) => fmt.gauge(&mut out, g),
            Payload::Condense(c) => fmt.condense(&mut out, c),
            Payload::Compare(c) => fmt.compare(&mut out, c),
        }
        out
    }
}

struct Fmt {
    den: u32,
}

const DISPLAY_TOL: f64 = 1e-9;

impl Fmt {
    fn z(&self, z: Cx) -> String {
        pretty_complex(C64::new(z[0], z[1]), self.den, DISPLAY_TOL)
    }

    fn r(&self, x: f64) -> String {
        pretty_real(x, DISPLAY_TOL)
    }

    fn residual(x: f64) -> String {
        if x < 1e-10 {
            "< 1e-10".to_string()
        } else {
            format!("{x:.1e}")
        }
    }

    fn checks(&self, out: &mut String, checks: &[(String, f64)]) {
        out.push_str("\n| check | residual |\n|---|---|\n");
        for (name, v) in checks {
            out.push_str(&format!("| {name} | {} |\n", Self::residual(*v)));
        }
    }

    fn matrix(&self, out: &mut String, labels: &[String], m: &[Vec<Cx>], scale: f64) {
        out.push_str(&format!("| | {} |\n", labels.join(" | ")));
        out.push_str(&format!("|---|{}\n", "---|".repeat(labels.len())));
        for (l, row) in labels.iter().zip(m) {
            let cells: Vec<String> = row.iter().map(|&z| self.z([z[0] * scale, z[1] * scale])).collect();
            out.push_str(&format!("| {l} | {} |\n", cells.join(" | ")));
        }
    }

    fn validate(&self, out: &mut String, v: &ValidatePayload) {
        out.push_str(&format!(
            "valid: {}\n\nrank {}, {} pentagon instances, max pentagon residual {}\n",
            if v.valid { "yes" } else { "no" },
            v.rank,
            v.pentagon_instances,
            Self::residual(v.pentagon_max_residual)
        ));
        if !v.violations.is_empty() {
            out.push_str("\n| violation | labels | residual |\n|---|---|---|\n");
            for x in &v.violations {
                out.push_str(&format!("| {} | {} | {:.3e} |\n", x.kind, x.indices.join(","), x.residual));
            }
        }
    }

    fn spectrum(&self, out: &mut String, s: &SpectrumPayload) {
        out.push_str(&format!(
            "{} tube algebra, dimension {}, {} blocks, Σ D² = {}\n\n",
            s.algebra,
            s.dim,
            s.blocks.len(),
            s.block_dim_sq
        ));
        out.push_str("| block | sector | D | d | θ |\n|---|---|---|---|---|\n");
        for b in &s.blocks {
            out.push_str(&format!("| {} | {} | {} | {} | {} |\n", b.label, b.sector, b.block_dim, self.r(b.qdim), self.z(b.twist)));
        }
        out.push_str(&format!("\nICI coefficients × {}:\n\n", self.r(s.normalization)));
        let labels: Vec<String> = s.blocks.iter().map(|b| b.label.clone()).collect();
        out.push_str(&format!("| | {} |\n|---|{}\n", s.tubes.join(" | "), "---|".repeat(s.tubes.len())));
        for (l, row) in labels.iter().zip(&s.coefficients) {
            let cells: Vec<String> =
                row.iter().map(|z| self.z([z[0] * s.normalization, z[1] * s.normalization])).collect();
            out.push_str(&format!("| {l} | {} |\n", cells.join(" | ")));
        }
    }

    fn modular(&self, out: &mut String, m: &ModularPayload) {
        out.push_str(&format!("{} anyons, D = {}\n\n", m.labels.len(), self.r(m.total_dim)));
        out.push_str("| anyon | d | θ | FS | γ |\n|---|---|---|---|---|\n");
        for i in 0..m.labels.len() {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {:.6} |\n",
                m.labels[i],
                self.r(m.d[i]),
                self.z(m.theta[i]),
                self.r(m.fs[i]),
                m.gamma[i]
            ));
        }
        out.push_str(&format!("\nD·S (D = {}):\n\n", self.r(m.total_dim)));
        self.matrix(out, &m.labels, &m.s, m.total_dim);
        out.push_str("\nFusion rules:\n\n");
        for f in &m.fusion {
            out.push_str(&format!("- {f}\n"));
        }
        self.checks(out, &m.checks);
    }

    fn defects(&self, out: &mut String, d: &DefectsPayload) {
        out.push_str(&format!("grading group {{{}}}\n\n", d.group.join(", ")));
        out.push_str(&format!(
            "| defect | sector | D | d | θ | {} | η(h,h) |\n|---|---|---|---|---|{}---|\n",
            d.group.iter().map(|h| format!("ρ_{h}")).collect::<Vec<_>>().join(" | "),
            "---|".repeat(d.group.len())
        ));
        for x in &d.defects {
            let eta: Vec<String> = x.eta_squares.iter().map(|(h, v)| format!("{h}: {}", self.z(*v))).collect();
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                x.label,
                x.sector,
                x.block_dim,
                self.r(x.qdim),
                self.z(x.twist),
                x.images.join(" | "),
                eta.join(", ")
            ));
        }
        out.push_str("\nG-crossed S:\n\n");
        self.matrix(out, &d.gcrossed_keys, &d.gcrossed_s, 1.0);
        out.push_str("\nG-crossed T (column = source, row = image):\n\n");
        self.matrix(out, &d.gcrossed_keys, &d.gcrossed_t, 1.0);
        self.checks(out, &d.checks);
    }

    fn gauge(&self, out: &mut String, g: &GaugePayload) {
        out.push_str(&format!("gauged group of order {}, {} anyons\n\n", g.group_order, g.anyons.len()));
        out.push_str("| anyon | defect | d_μ | D | d | θ |\n|---|---|---|---|---|---|\n");
        for a in &g.anyons {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                a.label,
                a.defect,
                a.irrep_dim,
                a.block_dim,
                self.r(a.qdim),
                self.z(a.twist)
            ));
        }
        out.push_str(&format!("\nD·S (D = {}):\n\n", self.r(g.modular.total_dim)));
        self.matrix(out, &g.modular.labels, &g.modular.s, g.modular.total_dim);
        out.push_str(&format!("\nMorita match with the direct double: {}\n", if g.morita_match { "yes" } else { "no" }));
        if let Some(d) = &g.diagnostic {
            out.push_str(&format!("\ndiagnostic: {d}\n"));
        }
        if !g.pairs.is_empty() {
            let pairs: Vec<String> = g.pairs.iter().map(|(a, b)| format!("{a} ↔ {b}")).collect();
            out.push_str(&format!("\n{}\n", pairs.join(", ")));
        }
        let lost: Vec<String> =
            g.twisted_states.iter().filter(|t| !t.2).map(|t| format!("O^{}_{}", t.1, t.0)).collect();
        if !lost.is_empty() {
            out.push_str(&format!("\nTwisted states removed by gauging: {}\n", lost.join(", ")));
        }
        self.checks(out, &g.checks);
    }

    fn condense(&self, out: &mut String, c: &CondensePayload) {
        out.push_str("| Sectors | Defects | d | θ | Condensed anyons |\n|---|---|---|---|---|\n");
        for r in &c.rows {
            let anyons: Vec<String> =
                r.anyons.iter().map(|(l, d, t)| format!("{l} (d={}, θ={})", self.r(*d), self.z(*t))).collect();
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.sector,
                r.defect,
                self.r(r.qdim),
                self.z(r.twist),
                anyons.join(", ")
            ));
        }
        let list = |v: &[String]| if v.is_empty() { "∅".to_string() } else { v.join(", ") };
        out.push_str(&format!("\nCondensed to the vacuum: {}\n", list(&c.condensed)));
        out.push_str(&format!("\nConfined defects: {}\n", list(&c.confined)));
        out.push_str(&format!("\nSplit anyons: {}\n", list(&c.split)));
        let ids: Vec<String> = c.identifications.iter().map(|k| format!("{{{}}}", k.join(", "))).collect();
        out.push_str(&format!("\nIdentification classes: {}\n", ids.join(" ")));
        out.push_str(&format!("\nRegauging returns the double: {}\n", if c.roundtrip { "yes" } else { "no" }));
        self.checks(out, &c.checks);
    }

    fn compare(&self, out: &mut String, c: &ComparePayload) {
        out.push_str(&format!("ranks: {} and {}\n\n", c.ranks.0, c.ranks.1));
        out.push_str(&format!("Morita match: {}\n", if c.matched { "yes" } else { "no" }));
        if let Some(d) = &c.diagnostic {
            out.push_str(&format!("\ndiagnostic: {d}\n"));
        }
        if !c.pairs.is_empty() {
            out.push_str("\n| first | second |\n|---|---|\n");
            for (a, b) in &c.pairs {
                out.push_str(&format!("| {a} | {b} |\n"));
            }
        }
    }
}
