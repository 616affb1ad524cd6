//! Named built-in categories.
//!
//! Static entries are listed by [`registry`]. Two parametric families are
//! also accepted by [`fixture`]:
//!
//! * `vec_g_omega:<G>:<cocycle>` — `Vec_G^α` without a grading;
//! * `spt:<G>:<cocycle>` — `Vec_G^α` graded by `G` (a `G`-SPT after
//!   condensation).
//!
//! Groups and cocycle names are those of [`FiniteGroup::by_name`] and
//! [`ThreeCocycle::library`], e.g. `spt:Z2xZ2:II` or `spt:Z3:power:2`.

use serde::Serialize;

use crate::category::{builtin_extension, ising, vec_g_omega, FiniteGroup, FusionCategory, Grading, ThreeCocycle};
use crate::error::{Error, Result};

/// Description of one registered fixture.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureInfo {
    /// Registry name.
    pub name: &'static str,
    /// One-line description.
    pub description: &'static str,
}

const ENTRIES: &[(&str, &str)] = &[
    ("toric_code", "Vec_Z2 graded by Z2; its double is the toric code"),
    ("ising", "Ising {0, psi, sigma} with the Z2 grading {0,psi} + {sigma} (alias of ising+)"),
    ("ising+", "Ising with Frobenius-Schur indicator kappa_sigma = +1, Z2-graded"),
    ("ising-", "Ising with Frobenius-Schur indicator kappa_sigma = -1, Z2-graded"),
    ("em_toric_code", "Z2-graded Ising: the e-m exchange symmetry-enriched toric code (alias of ising+)"),
    ("tc_z2z2_trivial", "Vec_{Z2xZ2} graded by the first coordinate"),
    ("tc_z2z2_twisted", "Vec_{Z2xZ2}^{omega_I} graded by the first coordinate"),
    ("tc_z2z2_II", "Vec_{Z2xZ2}^{omega_I omega_II} graded by the first coordinate"),
    ("tc_z4_trivial", "Vec_Z4 graded by parity"),
    ("tc_z4_twisted", "Vec_Z4 with the parity-pulled-back cocycle, graded by parity"),
    ("z2z2_wII", "Vec_{Z2xZ2}^{omega_II} graded by {00,11} + {01,10}"),
    ("z4", "Vec_Z4 graded by Z4"),
    ("z4_z2graded", "Vec_Z4 graded by parity (alias of tc_z4_trivial)"),
    ("vec_s3", "Vec_S3 graded by S3"),
    ("vec_s3_z2graded", "Vec_S3 graded by the sign map {1,r,r2} + {s,sr,sr2}"),
    ("double_semion", "Vec_Z2^omega graded by Z2 (its double is the doubled semion)"),
];

/// All static fixtures, in a fixed order.
pub fn registry() -> Vec<FixtureInfo> {
    ENTRIES.iter().map(|&(name, description)| FixtureInfo { name, description }).collect()
}

/// Names of all static fixtures.
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Build a fixture by name (static or parametric).
pub fn fixture(name: &str) -> Result<FusionCategory> {
    if let Some(rest) = name.strip_prefix("vec_g_omega:") {
        let (g, alpha) = split_param(name, rest)?;
        return vec_g_omega(&ThreeCocycle::library(g, alpha)?)?.with_grading(None);
    }
    if let Some(rest) = name.strip_prefix("spt:") {
        let (g, alpha) = split_param(name, rest)?;
        return vec_g_omega(&ThreeCocycle::library(g, alpha)?);
    }
    let z2 = || FiniteGroup::cyclic(2).with_names(vec!["1".into(), "x".into()]).expect("two names");
    match name {
        "toric_code" => vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::cyclic(2))),
        "ising" | "ising+" | "em_toric_code" => ising(1),
        "ising-" => ising(-1),
        "tc_z2z2_trivial" | "tc_z2z2_twisted" | "tc_z2z2_II" | "tc_z4_trivial" | "tc_z4_twisted" => {
            builtin_extension(name)
        }
        "z4_z2graded" => builtin_extension("tc_z4_trivial"),
        "z2z2_wII" => vec_g_omega(&ThreeCocycle::library("Z2xZ2", "II")?)?
            .with_grading(Some(Grading { group: z2(), sector: vec![0, 1, 1, 0] })),
        "z4" => vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::cyclic(4))),
        "vec_s3" => vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::s3())),
        "vec_s3_z2graded" => vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::s3()))?
            .with_grading(Some(Grading { group: z2(), sector: vec![0, 0, 0, 1, 1, 1] })),
        "double_semion" => vec_g_omega(&ThreeCocycle::library("Z2", "I")?),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

fn split_param<'a>(name: &str, rest: &'a str) -> Result<(&'a str, &'a str)> {
    rest.split_once(':')
        .filter(|(g, a)| !g.is_empty() && !a.is_empty())
        .ok_or_else(|| Error::UnknownFixture(format!("{name} (expected <family>:<group>:<cocycle>)")))
}
