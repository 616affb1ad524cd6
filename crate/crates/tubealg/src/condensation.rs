//! Breaking a graded symmetry down to its trivial sector (condensation).
//!
//! Every anyon `I_A` of the full tube algebra of a `G`-graded category splits
//! into subidempotent pieces `(I_A)_g^h`, obtained by keeping only the tube
//! coefficients with `sector(p) = g` and `sector(s) = h`:
//!
//! * `(I_A)_g^1` lies in the defect tube algebra and decomposes into defect
//!   idempotents, `(I_A)_g^1 = Σ_b c_b I_b`. The normalisation `K_b = 1/c_b`
//!   is fixed by idempotency. Anyons whose pieces are proportional are
//!   identified, anyons with several pieces split, and pieces in sectors
//!   `g ≠ 1` are confined defects.
//! * `(I_A)_g^h` for `h ≠ 1` lies in the span of the domain walls `O^h_b`.
//!
//! The anyons with `(I_A)_1^1 ∝ I_0` are the condensed `Rep(G)` bosons.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::category::{FiniteGroup, FusionCategory};
use crate::defects::DefectTheory;
use crate::error::Result;
use crate::gauging::{certify_match, gauge, MatchCertificate};
use crate::linalg::{max_abs, re, zeros, CVec, C64};
use crate::modular::{modular_data, ModularData};
use crate::par;
use crate::spectra::{decompose, BlockDecomposition};
use crate::tubes::TubeAlgebra;

/// Coefficients below this are treated as zero when reading off supports.
pub const SUPPORT_TOL: f64 = 1e-8;

/// One defect piece of a restricted anyon.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    /// Defect index in the defect theory.
    pub defect: usize,
    /// Defect label.
    pub label: String,
    /// Sector of the defect.
    pub sector: usize,
    /// `c_b` in `(I_A)_g^1 = Σ_b c_b I_b`.
    pub coefficient: C64,
    /// Normalisation `K_b = 1/c_b` making the piece idempotent.
    pub normalization: f64,
}

/// Restriction data of one anyon of the double.
#[derive(Clone, Debug, Serialize)]
pub struct AnyonRestriction {
    /// Anyon index in the double.
    pub anyon: usize,
    /// Anyon label.
    pub label: String,
    /// Quantum dimension.
    pub qdim: f64,
    /// Topological spin.
    pub twist: C64,
    /// Sectors `g` with `(I_A)_g^1 ≠ 0`.
    pub support: Vec<usize>,
    /// Defect pieces of the `(·)^1` parts.
    pub pieces: Vec<Piece>,
    /// Pairs `(g,h)`, `h ≠ 1`, with `(I_A)_g^h ≠ 0`.
    pub wall_support: Vec<(usize, usize)>,
    /// `‖(I_A)_g^1 − Σ c_b I_b‖`, maximised over `g`.
    pub decomposition_residual: f64,
    /// Residual of expanding `(I_A)_g^h` in domain walls, maximised over `(g,h)`.
    pub wall_residual: f64,
}

impl AnyonRestriction {
    /// Whether the anyon survives in the trivial sector.
    pub fn deconfined(&self) -> bool {
        self.support.contains(&0)
    }
}

/// Summary of one recovered defect.
#[derive(Clone, Debug, Serialize)]
pub struct RecoveredDefect {
    /// Label.
    pub label: String,
    /// Sector.
    pub sector: usize,
    /// Block dimension.
    pub block_dim: usize,
    /// Quantum dimension.
    pub qdim: f64,
    /// Spin of the defect block.
    pub twist: C64,
    /// Anyons of the double that restrict onto this defect.
    pub sources: Vec<usize>,
}

/// Residuals certifying a condensation computation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CondensationResiduals {
    /// Worst defect-decomposition residual.
    pub decomposition: f64,
    /// Worst domain-wall expansion residual.
    pub walls: f64,
    /// Worst `|d_A − Σ_b d_b|` over the pieces of an anyon in one sector.
    pub splitting_qdim: f64,
    /// Number of defects that are not reached by any anyon.
    pub unreached_defects: usize,
    /// Worst `|θ − 1|` over condensed anyons.
    pub condensed_twist: f64,
    /// Worst `|S_{ab} S_{00}/(S_{0a} S_{0b}) − 1|` over pairs of condensed anyons
    /// (trivial mutual monodromy).
    pub condensed_monodromy: f64,
}

impl CondensationResiduals {
    /// Whether every residual is below `tol` and every defect is reached.
    pub fn passes(&self, tol: f64) -> bool {
        [self.decomposition, self.walls, self.splitting_qdim, self.condensed_twist, self.condensed_monodromy]
            .into_iter()
            .all(|r| r < tol)
            && self.unreached_defects == 0
    }
}

/// Result of breaking the grading symmetry.
#[derive(Debug, Serialize)]
pub struct CondensationReport {
    /// Grading group.
    pub group: FiniteGroup,
    /// Modular data of the double (input anyons).
    pub double: ModularData,
    /// Per-anyon restriction data.
    pub anyons: Vec<AnyonRestriction>,
    /// Recovered defects (the symmetry-enriched theory after condensation).
    pub defects: Vec<RecoveredDefect>,
    /// Anyons condensing to the vacuum.
    pub condensed: Vec<usize>,
    /// Deconfined anyons grouped by proportional trivial-sector restrictions.
    pub identification_classes: Vec<Vec<usize>>,
    /// Defects in nontrivial sectors (confined).
    pub confined: Vec<usize>,
    /// Certificate residuals.
    pub residuals: CondensationResiduals,
    /// The defect theory used for the decomposition.
    #[serde(skip)]
    pub theory: DefectTheory,
}

impl CondensationReport {
    /// Labels of the condensed anyons.
    pub fn condensed_labels(&self) -> Vec<String> {
        self.condensed.iter().map(|&a| self.anyons[a].label.clone()).collect()
    }

    /// Labels of the confined defects.
    pub fn confined_labels(&self) -> Vec<String> {
        self.confined.iter().map(|&b| self.defects[b].label.clone()).collect()
    }

    /// Deconfined (trivial-sector) defects.
    pub fn deconfined(&self) -> Vec<usize> {
        (0..self.defects.len()).filter(|&b| self.defects[b].sector == 0).collect()
    }

    /// Anyons that split into more than one defect piece.
    pub fn split_anyons(&self) -> Vec<usize> {
        (0..self.anyons.len()).filter(|&a| self.anyons[a].pieces.len() > 1).collect()
    }
}

/// Break the grading symmetry of `cat` down to its trivial sector.
pub fn break_symmetry(cat: &FusionCategory, seed: u64, tol: f64) -> Result<CondensationReport> {
    let theory = DefectTheory::build(cat, seed, tol)?;
    let full = theory.full();
    let dec = decompose(full, None, seed, tol)?;
    let double = modular_data(full, &dec)?;
    let group = theory.group.clone();
    let ng = group.order();

    let sector_p: Vec<usize> = full.basis().iter().map(|t| cat.sector(t.p)).collect();
    let sector_s: Vec<usize> = full.basis().iter().map(|t| cat.sector(t.s)).collect();
    let filter = |x: &CVec, g: usize, h: usize| {
        CVec::from_fn(full.dim(), |i, _| if sector_p[i] == g && sector_s[i] == h { x[i] } else { re(0.0) })
    };
    let defect_norms: Vec<C64> = theory.ici.iter().map(|e| full.trace(e)).collect();
    let walls: Vec<(usize, usize, &CVec, C64)> = (0..theory.len())
        .flat_map(|b| (1..ng).map(move |h| (b, h)))
        .map(|(b, h)| {
            let o = &theory.walls[b][h];
            (b, h, o, full.trace(&full.mul(&full.dag(o), o)))
        })
        .collect();

    let anyons: Vec<AnyonRestriction> = par::map_range(dec.len(), |a| {
        let ia = &dec.blocks[a].idempotent;
        let mut out = AnyonRestriction {
            anyon: a,
            label: double.labels[a].clone(),
            qdim: double.d[a],
            twist: double.theta[a],
            support: Vec::new(),
            pieces: Vec::new(),
            wall_support: Vec::new(),
            decomposition_residual: 0.0,
            wall_residual: 0.0,
        };
        for g in 0..ng {
            let x = filter(ia, g, 0);
            if max_abs(&x) < SUPPORT_TOL {
                continue;
            }
            out.support.push(g);
            let mut recon = zeros(full.dim());
            for b in (0..theory.len()).filter(|&b| theory.sector(b) == g) {
                let c = full.trace(&full.mul(&theory.ici[b], &x)) / defect_norms[b];
                if c.norm() > SUPPORT_TOL {
                    recon += &theory.ici[b] * c;
                    out.pieces.push(Piece {
                        defect: b,
                        label: theory.dec.blocks[b].label.clone(),
                        sector: g,
                        coefficient: c,
                        normalization: 1.0 / c.re,
                    });
                }
            }
            out.decomposition_residual = out.decomposition_residual.max(max_abs(&(recon - x)));
        }
        for g in 0..ng {
            for h in 1..ng {
                let x = filter(ia, g, h);
                if max_abs(&x) < SUPPORT_TOL {
                    continue;
                }
                out.wall_support.push((g, h));
                let mut recon = zeros(full.dim());
                for &(_, wh, o, norm) in &walls {
                    if wh != h {
                        continue;
                    }
                    let c = full.trace(&full.mul(&full.dag(o), &x)) / norm;
                    recon += o * c;
                }
                out.wall_residual = out.wall_residual.max(max_abs(&(recon - x)));
            }
        }
        out
    });

    let mut res = CondensationResiduals::default();
    let mut defects: Vec<RecoveredDefect> = (0..theory.len())
        .map(|b| RecoveredDefect {
            label: theory.dec.blocks[b].label.clone(),
            sector: theory.sector(b),
            block_dim: theory.block_dim(b),
            qdim: theory.qdim(b),
            twist: theory.dec.blocks[b].twist,
            sources: Vec::new(),
        })
        .collect();
    for an in &anyons {
        res.decomposition = res.decomposition.max(an.decomposition_residual);
        res.walls = res.walls.max(an.wall_residual);
        for &g in &an.support {
            let sum: f64 = an.pieces.iter().filter(|p| p.sector == g).map(|p| defects[p.defect].qdim).sum();
            res.splitting_qdim = res.splitting_qdim.max((sum - an.qdim).abs());
        }
        for p in &an.pieces {
            defects[p.defect].sources.push(an.anyon);
        }
    }
    res.unreached_defects = defects.iter().filter(|d| d.sources.is_empty()).count();

    let vac = theory.vacuum();
    let condensed: Vec<usize> = anyons
        .iter()
        .filter(|a| a.pieces.iter().any(|p| p.defect == vac))
        .map(|a| a.anyon)
        .collect();
    let v0 = double.vacuum();
    for &a in &condensed {
        res.condensed_twist = res.condensed_twist.max((double.theta[a] - re(1.0)).norm());
        for &b in &condensed {
            let m = double.s[(a, b)] * double.s[(v0, v0)] / (double.s[(v0, a)] * double.s[(v0, b)]);
            res.condensed_monodromy = res.condensed_monodromy.max((m - re(1.0)).norm());
        }
    }

    // Identification: equal normalised trivial-sector restriction profiles.
    let profile = |a: &AnyonRestriction| -> Vec<(usize, i64)> {
        let total: f64 = a.pieces.iter().filter(|p| p.sector == 0).map(|p| p.coefficient.norm()).sum();
        a.pieces
            .iter()
            .filter(|p| p.sector == 0)
            .map(|p| (p.defect, (p.coefficient.norm() / total * 1e6).round() as i64))
            .collect()
    };
    let mut classes: Vec<(Vec<(usize, i64)>, Vec<usize>)> = Vec::new();
    for an in anyons.iter().filter(|a| a.deconfined()) {
        let key = profile(an);
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(an.anyon),
            None => classes.push((key, vec![an.anyon])),
        }
    }
    let identification_classes = classes.into_iter().map(|(_, m)| m).collect();
    let confined = (0..theory.len()).filter(|&b| theory.sector(b) != 0).collect();

    Ok(CondensationReport {
        group,
        double,
        anyons,
        defects,
        condensed,
        identification_classes,
        confined,
        residuals: res,
        theory,
    })
}

/// Anyons that can end on the vacuum, `t_A^{0s0s} ≠ 0` for some `s`, with the
/// corresponding charge projectors `Σ_s t_A^{0s0s} T_{0s0}^s`.
pub fn vacuum_attachable_sectors(full: &TubeAlgebra, dec: &BlockDecomposition) -> Vec<(usize, CVec)> {
    let vac_tubes: Vec<usize> = full
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.p == 0 && t.r == 0 && t.q == t.s)
        .map(|(i, _)| i)
        .collect();
    dec.blocks
        .iter()
        .enumerate()
        .filter_map(|(a, b)| {
            let mut proj = zeros(full.dim());
            for &i in &vac_tubes {
                proj[i] = b.idempotent[i];
            }
            (max_abs(&proj) > SUPPORT_TOL).then_some((a, proj))
        })
        .collect()
}

/// Graded analogue of [`vacuum_attachable_sectors`]: anyons whose
/// trivial-sector restriction overlaps the vacuum defect. Equals the
/// condensed set.
pub fn graded_vacuum_attachable(report: &CondensationReport) -> BTreeSet<usize> {
    let vac = report.theory.vacuum();
    report
        .anyons
        .iter()
        .filter(|a| a.pieces.iter().any(|p| p.defect == vac))
        .map(|a| a.anyon)
        .collect()
}

/// Certificate that condensing and then gauging returns the double.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTrip {
    /// Number of anyons of the double.
    pub double_rank: usize,
    /// Number of anyons after regauging.
    pub gauged_rank: usize,
    /// Modular-data comparison.
    pub certificate: MatchCertificate,
}

/// Break the symmetry, gauge it back, and compare with the original double.
pub fn roundtrip_check(cat: &FusionCategory, seed: u64, tol: f64) -> Result<RoundTrip> {
    let report = break_symmetry(cat, seed, tol)?;
    let gauged = gauge(&report.theory, seed)?;
    Ok(RoundTrip {
        double_rank: report.double.len(),
        gauged_rank: gauged.modular.len(),
        certificate: certify_match(&gauged.modular, &report.double, 1e-7),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{builtin_extension, ising, vec_g_omega, ThreeCocycle};

    #[test]
    fn doubled_ising_breaks_to_em_toric_code() {
        let r = break_symmetry(&ising(1).unwrap(), 3, 1e-8).unwrap();
        assert!(r.residuals.passes(1e-8), "{:?}", r.residuals);
        assert_eq!(r.double.len(), 9);
        assert_eq!(r.condensed.len(), 2);
        assert_eq!(r.confined.len(), 2);
        assert_eq!(r.deconfined().len(), 4);
        // σσ̄ (d = 2, θ = 1) is the only splitting anyon.
        let split = r.split_anyons();
        assert_eq!(split.len(), 1);
        assert!((r.double.d[split[0]] - 2.0).abs() < 1e-9);
        // Classes: {0,ψψ̄}, {ψ,ψ̄}, {σσ̄}, and in the x sector σ±.
        let mut sizes: Vec<usize> = r.identification_classes.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2]);
        for &b in &r.confined {
            let mut spins: Vec<C64> = r.defects[b].sources.iter().map(|&a| r.double.theta[a]).collect();
            spins.sort_by(|x, y| x.arg().partial_cmp(&y.arg()).unwrap());
            assert_eq!(spins.len(), 2);
            let s = spins[0] * spins[1].conj();
            assert!((s.norm() - 1.0).abs() < 1e-9);
            assert!((r.defects[b].qdim - 2f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn toric_code_condenses_e() {
        let cat = vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::cyclic(2))).unwrap();
        let full = TubeAlgebra::build(&cat, None);
        let dec = decompose(&full, None, 1, 1e-8).unwrap();
        let att = vacuum_attachable_sectors(&full, &dec);
        assert_eq!(att.len(), 2);
        let r = break_symmetry(&cat, 1, 1e-8).unwrap();
        assert!(r.residuals.passes(1e-8), "{:?}", r.residuals);
        assert_eq!(r.condensed.len(), 2);
        assert!(r.condensed.iter().all(|&a| (r.double.theta[a] - re(1.0)).norm() < 1e-9));
        assert_eq!(r.confined.len(), 1);
        let set: BTreeSet<usize> = att.iter().map(|(a, _)| *a).collect();
        assert_eq!(set, r.condensed.iter().copied().collect());
    }

    #[test]
    fn ungraded_input_is_trivial() {
        let cat = ising(1).unwrap().with_grading(None).unwrap();
        let r = break_symmetry(&cat, 2, 1e-8).unwrap();
        assert_eq!(r.condensed.len(), 1);
        assert!(r.confined.is_empty());
        assert!(r.split_anyons().is_empty());
        assert!(roundtrip_check(&cat, 2, 1e-8).unwrap().certificate.matched);
    }

    #[test]
    fn extensions_round_trip() {
        for name in ["tc_ising+", "tc_z2z2_II", "tc_z4_twisted"] {
            let rt = roundtrip_check(&builtin_extension(name).unwrap(), 4, 1e-8).unwrap();
            assert!(rt.certificate.matched, "{name}: {:?}", rt.certificate.diagnostic);
        }
    }

    #[test]
    fn graded_attachable_is_condensed_set() {
        let r = break_symmetry(&ising(-1).unwrap(), 6, 1e-8).unwrap();
        let set = graded_vacuum_attachable(&r);
        assert_eq!(set.into_iter().collect::<Vec<_>>(), r.condensed);
    }
}
