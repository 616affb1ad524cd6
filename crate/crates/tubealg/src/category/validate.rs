//! Numeric and structural validation of fusion-category data.

use serde::Serialize;

use super::FusionCategory;
use crate::error::{Error, Result};
use crate::linalg::re;

/// Class of a violated invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Unit fusion rules `N_{0a}^b = N_{a0}^b = δ_{ab}`.
    UnitFusion,
    /// `N_{ab}^0 = δ_{b,ā}`.
    DualFusion,
    /// Associativity of the fusion ring.
    FusionAssociativity,
    /// Perron–Frobenius quantum dimensions.
    QuantumDimension,
    /// F entry stored off the admissibility support.
    FSupport,
    /// F restricted to an `(a,b,c,d)` slice is not unitary.
    Unitarity,
    /// Pentagon equation.
    Pentagon,
    /// Triangle gauge `F^{a0c} = F^{0bc} = F^{ab0} = 1`.
    TriangleGauge,
    /// `|F^{aāa}_{a;0,0}| = 1/d_a`.
    PivotalGauge,
    /// Frobenius–Schur data: `κ_a κ_ā = 1`, `κ_a = ±1` for self-dual `a`.
    FrobeniusSchur,
    /// Grading compatibility of fusion and duals.
    Grading,
    /// Every sector is inhabited and has `D_g² = D_1²`.
    SectorDimension,
}

/// One violated invariant with the offending labels and residual.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    /// Which invariant failed.
    pub kind: ViolationKind,
    /// Offending index tuple, as labels.
    pub indices: Vec<String>,
    /// Size of the violation.
    pub residual: f64,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    /// Every violated invariant.
    pub violations: Vec<Violation>,
    /// Largest pentagon residual over all admissible instances.
    pub pentagon_max_residual: f64,
    /// Number of pentagon instances evaluated.
    pub pentagon_instances: usize,
    /// Largest deviation from unitarity over all F slices.
    pub unitarity_max_residual: f64,
    /// Largest `|D_g² − D_1²|`.
    pub sector_dim_max_residual: f64,
}

impl ValidationReport {
    /// Whether no invariant was violated.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Convert into an error when invalid.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidCategory(format!(
                "{} violation(s); first: {:?} at ({}) residual {:e}",
                self.violations.len(),
                v.kind,
                v.indices.join(","),
                v.residual
            ))),
        }
    }
}

/// Check every invariant of the category (and its grading, if any) at
/// tolerance `tol`.
pub fn validate(cat: &FusionCategory, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = cat.rank();
    let names = |idx: &[usize]| idx.iter().map(|&x| cat.label(x).to_string()).collect::<Vec<_>>();
    let push = |rep: &mut ValidationReport, kind, idx: &[usize], residual: f64| {
        rep.violations.push(Violation { kind, indices: names(idx), residual });
    };

    // Fusion ring axioms.
    for a in 0..n {
        for b in 0..n {
            let want = a == b;
            if cat.n(0, a, b) != want || cat.n(a, 0, b) != want {
                push(&mut rep, ViolationKind::UnitFusion, &[a, b], 1.0);
            }
            if cat.n(a, b, 0) != (b == cat.dual(a)) {
                push(&mut rep, ViolationKind::DualFusion, &[a, b], 1.0);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs = cat.fuse(a, b).iter().filter(|&&e| cat.n(e, c, d)).count();
                    let rhs = cat.fuse(b, c).iter().filter(|&&f| cat.n(a, f, d)).count();
                    if lhs != rhs {
                        push(&mut rep, ViolationKind::FusionAssociativity, &[a, b, c, d], (lhs as f64 - rhs as f64).abs());
                    }
                }
            }
        }
    }
    if !rep.violations.is_empty() {
        return rep;
    }

    // Quantum dimensions.
    for a in 0..n {
        for b in 0..n {
            let rhs: f64 = cat.fuse(a, b).iter().map(|&c| cat.d(c)).sum();
            let r = (cat.d(a) * cat.d(b) - rhs).abs();
            if r > tol {
                push(&mut rep, ViolationKind::QuantumDimension, &[a, b], r);
            }
        }
        let r = (cat.d(a) - cat.d(cat.dual(a))).abs();
        if r > tol {
            push(&mut rep, ViolationKind::QuantumDimension, &[a], r);
        }
    }

    // Support.
    for (k, v) in cat.f_entries() {
        if !cat.f_admissible(k) && v.norm() > tol {
            push(&mut rep, ViolationKind::FSupport, &k, v.norm());
        }
    }

    // Unitarity of each (a,b,c,d) slice.
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let es: Vec<usize> = cat.fuse(a, b).iter().copied().filter(|&e| cat.n(e, c, d)).collect();
                    let fs: Vec<usize> = cat.fuse(b, c).iter().copied().filter(|&f| cat.n(a, f, d)).collect();
                    if es.is_empty() {
                        continue;
                    }
                    let mut worst: f64 = 0.0;
                    for &e1 in &es {
                        for &e2 in &es {
                            let mut s = re(0.0);
                            for &f in &fs {
                                s += cat.f(a, b, c, d, e1, f) * cat.f(a, b, c, d, e2, f).conj();
                            }
                            let want = if e1 == e2 { 1.0 } else { 0.0 };
                            worst = worst.max((s - re(want)).norm());
                        }
                    }
                    rep.unitarity_max_residual = rep.unitarity_max_residual.max(worst);
                    if worst > tol {
                        push(&mut rep, ViolationKind::Unitarity, &[a, b, c, d], worst);
                    }
                }
            }
        }
    }

    // Pentagon over admissible instances.
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for &p in cat.fuse(a, b) {
                        for &q in cat.fuse(p, c) {
                            for &e in cat.fuse(q, d) {
                                for &r in cat.fuse(c, d) {
                                    for &s in cat.fuse(b, r) {
                                        if !cat.n(a, s, e) && !cat.n(p, r, e) {
                                            continue;
                                        }
                                        let lhs = cat.f(p, c, d, e, q, r) * cat.f(a, b, r, e, p, s);
                                        let mut rhs = re(0.0);
                                        for &x in cat.fuse(b, c) {
                                            rhs += cat.f(a, b, c, q, p, x) * cat.f(a, x, d, e, q, s) * cat.f(b, c, d, s, x, r);
                                        }
                                        let res = (lhs - rhs).norm();
                                        rep.pentagon_instances += 1;
                                        rep.pentagon_max_residual = rep.pentagon_max_residual.max(res);
                                        if res > tol {
                                            push(&mut rep, ViolationKind::Pentagon, &[a, b, c, d, e, p, q, r, s], res);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Triangle gauge.
    for k in cat.admissible_f_indices() {
        let [a, b, c, d, e, f] = k;
        if a == 0 || b == 0 || c == 0 {
            let r = (cat.f(a, b, c, d, e, f) - re(1.0)).norm();
            if r > tol {
                push(&mut rep, ViolationKind::TriangleGauge, &k, r);
            }
        }
    }

    // Pivotal normalisation and Frobenius–Schur data.
    for a in 0..n {
        let ab = cat.dual(a);
        let v = cat.f(a, ab, a, a, 0, 0);
        let r = (v.norm() - 1.0 / cat.d(a)).abs();
        if r > tol {
            push(&mut rep, ViolationKind::PivotalGauge, &[a], r);
        }
        let r = (cat.kappa(a) * cat.kappa(ab) - re(1.0)).norm();
        if r > tol {
            push(&mut rep, ViolationKind::FrobeniusSchur, &[a, ab], r);
        }
        if ab == a && cat.kappa(a).im.abs() > tol {
            push(&mut rep, ViolationKind::FrobeniusSchur, &[a], cat.kappa(a).im.abs());
        }
    }

    // Grading.
    if let Some(g) = cat.grading() {
        let grp = &g.group;
        if g.sector[0] != 0 {
            push(&mut rep, ViolationKind::Grading, &[0], 1.0);
        }
        for a in 0..n {
            if g.sector[cat.dual(a)] != grp.inv(g.sector[a]) {
                push(&mut rep, ViolationKind::Grading, &[a, cat.dual(a)], 1.0);
            }
            for b in 0..n {
                for &c in cat.fuse(a, b) {
                    if g.sector[c] != grp.mul(g.sector[a], g.sector[b]) {
                        push(&mut rep, ViolationKind::Grading, &[a, b, c], 1.0);
                    }
                }
            }
        }
        let d1 = cat.sector_dim_sq(0);
        for s in 0..grp.order() {
            let objs = cat.sector_objects(s);
            let dg = cat.sector_dim_sq(s);
            let r = (dg - d1).abs();
            rep.sector_dim_max_residual = rep.sector_dim_max_residual.max(r);
            if objs.is_empty() || r > tol {
                rep.violations.push(Violation {
                    kind: ViolationKind::SectorDimension,
                    indices: vec![grp.name(s).to_string()],
                    residual: if objs.is_empty() { d1 } else { r },
                });
            }
        }
    }
    rep
}
