//! Constructors and transformations of (graded) fusion categories.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{CategorySpec, FiniteGroup, FusionCategory, Grading, ThreeCocycle};
use crate::error::{Error, Result};
use crate::linalg::re;

/// The group Z2 with elements named `1` and `x`, used for two-sector gradings.
pub fn z2_grading_group() -> FiniteGroup {
    FiniteGroup::cyclic(2).with_names(vec!["1".into(), "x".into()]).expect("two names")
}

/// The pointed category `Vec_G^α`: objects are group elements, fusion is the
/// group law, all quantum dimensions are 1 and `F^{ghk} = α(g,h,k)`. The
/// category is graded by `G` itself.
pub fn vec_g_omega(alpha: &ThreeCocycle) -> Result<FusionCategory> {
    let r = alpha.residual();
    if r > super::cocycle::COCYCLE_TOL {
        return Err(Error::InvalidCocycle(format!("cocycle equation residual {r:e}")));
    }
    let g = alpha.group();
    let n = g.order();
    let mut fusion = Vec::with_capacity(n * n);
    let mut f = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            fusion.push((a, b, g.mul(a, b)));
            for c in 0..n {
                f.push(([a, b, c, g.mul(g.mul(a, b), c), g.mul(a, b), g.mul(b, c)], alpha.get(a, b, c)));
            }
        }
    }
    FusionCategory::from_spec(CategorySpec {
        labels: g.names().to_vec(),
        dual: (0..n).map(|a| g.inv(a)).collect(),
        fusion,
        qdim: None,
        f,
        trivial_f: false,
        grading: Some(Grading { group: g.clone(), sector: (0..n).collect() }),
    })
}

/// The Ising category `{0, psi, sigma}` with its Z2 grading `{0,psi} ⊕ {sigma}`.
/// `kappa_sign = −1` multiplies the sigma-sector associator `F^{σσσ}` by −1,
/// which flips the Frobenius–Schur indicator of sigma.
pub fn ising(kappa_sign: i32) -> Result<FusionCategory> {
    if kappa_sign != 1 && kappa_sign != -1 {
        return Err(Error::Malformed("kappa_sign must be +1 or -1".into()));
    }
    let (o, psi, sig) = (0, 1, 2);
    let fusion = vec![
        (o, o, o),
        (o, psi, psi),
        (o, sig, sig),
        (psi, o, psi),
        (psi, psi, o),
        (psi, sig, sig),
        (sig, o, sig),
        (sig, psi, sig),
        (sig, sig, o),
        (sig, sig, psi),
    ];
    let k = kappa_sign as f64;
    let mut f = Vec::new();
    for e in [o, psi] {
        for ff in [o, psi] {
            let sgn = if e == psi && ff == psi { -1.0 } else { 1.0 };
            f.push(([sig, sig, sig, sig, e, ff], re(k * sgn * FRAC_1_SQRT_2)));
        }
    }
    f.push(([sig, psi, sig, psi, sig, sig], re(-1.0)));
    f.push(([psi, sig, psi, sig, sig, sig], re(-1.0)));
    FusionCategory::from_spec(CategorySpec {
        labels: vec!["0".into(), "psi".into(), "sigma".into()],
        dual: vec![0, 1, 2],
        fusion,
        qdim: None,
        f,
        trivial_f: true,
        grading: Some(Grading { group: z2_grading_group(), sector: vec![0, 0, 1] }),
    })
}

/// Names of the built-in Z2-extensions of `Vec_Z2`.
pub const EXTENSION_NAMES: [&str; 7] = [
    "tc_ising+",
    "tc_ising-",
    "tc_z2z2_trivial",
    "tc_z2z2_twisted",
    "tc_z2z2_II",
    "tc_z4_trivial",
    "tc_z4_twisted",
];

/// The Z2-graded extensions of `Vec_Z2` (trivial sector `{0, psi}`).
///
/// * `tc_ising±` — Ising with `κ_σ = ±1`;
/// * `tc_z2z2_*` — `Vec_{Z2×Z2}` graded by the first coordinate, with cocycle
///   trivial, `(−1)^{a0 b0 c0}` (`twisted`) or `(−1)^{a0 b0 c0 + a0 b1 c1}` (`II`);
/// * `tc_z4_*` — `Vec_Z4` graded by parity, with the trivial cocycle or the Z2
///   cocycle pulled back along the parity map (`twisted`).
pub fn builtin_extension(name: &str) -> Result<FusionCategory> {
    let z2 = z2_grading_group();
    match name {
        "tc_ising+" => ising(1),
        "tc_ising-" => ising(-1),
        "tc_z2z2_trivial" | "tc_z2z2_twisted" | "tc_z2z2_II" => {
            let cocycle = match name {
                "tc_z2z2_trivial" => "trivial",
                "tc_z2z2_twisted" => "I1",
                _ => "I1*II",
            };
            let cat = vec_g_omega(&ThreeCocycle::library("Z2xZ2", cocycle)?)?;
            let cat = cat.with_labels(vec!["0".into(), "psi".into(), "sigma".into(), "sigma_psi".into()])?;
            cat.with_grading(Some(Grading { group: z2, sector: vec![0, 0, 1, 1] }))
        }
        "tc_z4_trivial" | "tc_z4_twisted" => {
            let z4 = FiniteGroup::cyclic(4);
            let alpha = if name == "tc_z4_trivial" {
                ThreeCocycle::trivial(&z4)
            } else {
                ThreeCocycle::zn_power(&FiniteGroup::cyclic(2), 1).pullback(&z4, &[0, 1, 0, 1])?
            };
            let cat = vec_g_omega(&alpha)?;
            let cat = cat.with_labels(vec!["0".into(), "sigma".into(), "psi".into(), "sigma_bar".into()])?;
            cat.with_grading(Some(Grading { group: z2, sector: vec![0, 1, 0, 1] }))
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Multiply every associator by the grading-group cocycle:
/// `F^{a_g b_h c_k} ↦ α(g,h,k) F^{a_g b_h c_k}`.
pub fn shift_by_3cocycle(cat: &FusionCategory, alpha: &ThreeCocycle) -> Result<FusionCategory> {
    let grading = cat
        .grading()
        .ok_or_else(|| Error::Malformed("shifting requires a graded category".into()))?;
    if alpha.group() != &grading.group && alpha.group().table() != grading.group.table() {
        return Err(Error::InvalidCocycle("cocycle group differs from the grading group".into()));
    }
    let r = alpha.residual();
    if r > super::cocycle::COCYCLE_TOL {
        return Err(Error::InvalidCocycle(format!("cocycle equation residual {r:e}")));
    }
    let mut spec = cat.to_spec();
    for (k, v) in spec.f.iter_mut() {
        *v *= alpha.get(cat.sector(k[0]), cat.sector(k[1]), cat.sector(k[2]));
    }
    FusionCategory::from_spec(spec)
}

/// Coarsen the grading along `G → G/N` for a normal subgroup `N`.
pub fn regrade_by_quotient(cat: &FusionCategory, normal: &[usize]) -> Result<FusionCategory> {
    let grading = cat
        .grading()
        .ok_or_else(|| Error::Malformed("regrading requires a graded category".into()))?;
    let (q, proj) = grading.group.quotient(normal)?;
    let sector = grading.sector.iter().map(|&g| proj[g]).collect();
    cat.with_grading(Some(Grading { group: q, sector }))
}

/// Full subcategory on the sectors of a subgroup `H ≤ G`, graded by `H`.
pub fn restrict_to_subgroup(cat: &FusionCategory, sub: &[usize]) -> Result<FusionCategory> {
    let grading = cat
        .grading()
        .ok_or_else(|| Error::Malformed("restriction requires a graded category".into()))?;
    let (h, embed) = grading.group.subgroup(sub)?;
    let objects: Vec<usize> = (0..cat.rank()).filter(|&a| embed.contains(&grading.sector[a])).collect();
    let restricted = cat.subcategory(&objects)?;
    let sector = objects
        .iter()
        .map(|&a| embed.iter().position(|&g| g == grading.sector[a]).expect("sector in subgroup"))
        .collect();
    restricted.with_grading(Some(Grading { group: h, sector }))
}
