//! Randomized invariants: seed independence of the extracted data, cocycle
//! algebra, projective representation theory and wall-gauge invariance.

use proptest::prelude::*;

use tubealg::category::{vec_g_omega, FiniteGroup, ThreeCocycle};
use tubealg::defects::DefectTheory;
use tubealg::fixtures;
use tubealg::gauging::{direct_double, projective_irreps, slant, two_cocycle_residual};
use tubealg::linalg::{phase, C64};
use tubealg::modular::{match_modular_data, modular_data, ribbon_residual};
use tubealg::spectra::decompose;
use tubealg::tubes::TubeAlgebra;
use tubealg::{DEFAULT_SEED, DEFAULT_TOL};

const SMALL: &[&str] = &["toric_code", "ising", "ising-", "double_semion", "tc_z2z2_II", "tc_z4_twisted", "vec_s3"];
const GRADED: &[&str] = &["em_toric_code", "double_semion", "tc_z2z2_II", "tc_z4_twisted", "z2z2_wII", "vec_s3_z2graded"];
const Z2CUBE: &[&str] = &["I1", "I2", "I3", "II12", "II13", "II23", "III"];

/// Product of the library cocycles on `Z2xZ2xZ2` selected by `mask`.
fn z2cube_cocycle(mask: u8) -> ThreeCocycle {
    let parts: Vec<&str> = Z2CUBE.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| *n).collect();
    let name = if parts.is_empty() { "trivial".to_string() } else { parts.join("*") };
    ThreeCocycle::library("Z2xZ2xZ2", &name).unwrap()
}

/// Multiply `alpha` by the coboundary of the normalized 2-cochain `e^{iφ(a,b)}`.
fn with_coboundary(alpha: &ThreeCocycle, angles: &[f64]) -> ThreeCocycle {
    let g = alpha.group().clone();
    let n = g.order();
    let beta = |a: usize, b: usize| if a == 0 || b == 0 { phase(0.0) } else { phase(angles[(a * n + b) % angles.len()]) };
    ThreeCocycle::from_fn(&g, |a, b, c| {
        alpha.get(a, b, c) * beta(b, c) * beta(a, g.mul(b, c)) / (beta(g.mul(a, b), c) * beta(a, b))
    })
    .unwrap()
}

/// Number of `η`-regular elements of an abelian group: `h` with
/// `η(h,k) = η(k,h)` for all `k`.
fn regular_count(group: &FiniteGroup, eta: &[Vec<C64>]) -> usize {
    (0..group.order()).filter(|&h| (0..group.order()).all(|k| (eta[h][k] - eta[k][h]).norm() < 1e-9)).count()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn modular_data_is_seed_independent(idx in 0..SMALL.len(), seed in any::<u64>()) {
        let cat = fixtures::fixture(SMALL[idx]).unwrap();
        let full = TubeAlgebra::build(&cat, None);
        let reference = modular_data(&full, &decompose(&full, None, DEFAULT_SEED, DEFAULT_TOL).unwrap()).unwrap();
        let dec = decompose(&full, None, seed, DEFAULT_TOL).unwrap();
        let md = modular_data(&full, &dec).unwrap();
        prop_assert!(md.checks().max() < 1e-7);
        prop_assert!(ribbon_residual(&full, &dec, &md) < 1e-8);
        prop_assert!(match_modular_data(&reference, &md, 1e-7).is_some());
    }

    #[test]
    fn library_products_are_cocycles(mask in 0u8..128) {
        prop_assert!(z2cube_cocycle(mask).residual() < 1e-12);
    }

    #[test]
    fn coboundaries_do_not_change_the_double(k in 0i64..3, angles in prop::collection::vec(0.0..std::f64::consts::TAU, 9)) {
        let alpha = ThreeCocycle::zn_power(&FiniteGroup::cyclic(3), k);
        let twisted = with_coboundary(&alpha, &angles);
        prop_assert!(twisted.residual() < 1e-12);
        let a = direct_double(&vec_g_omega(&alpha).unwrap(), DEFAULT_SEED, DEFAULT_TOL).unwrap();
        let b = direct_double(&vec_g_omega(&twisted).unwrap(), DEFAULT_SEED, DEFAULT_TOL).unwrap();
        prop_assert!(match_modular_data(&a, &b, 1e-7).is_some());
    }

    #[test]
    fn slant_products_give_complete_projective_irreps(
        mask in 0u8..128,
        g in 0usize..8,
        angles in prop::collection::vec(0.0..std::f64::consts::TAU, 8),
    ) {
        let alpha = z2cube_cocycle(mask);
        let group = alpha.group().clone();
        let n = group.order();
        let raw: Vec<Vec<C64>> = (0..n).map(|h| (0..n).map(|k| slant(&alpha, g, h, k)).collect()).collect();
        // A normalized 1-cochain coboundary leaves the projective class alone.
        let c = |h: usize| if h == 0 { phase(0.0) } else { phase(angles[h]) };
        let eta: Vec<Vec<C64>> =
            (0..n).map(|h| (0..n).map(|k| raw[h][k] * c(h) * c(k) / c(group.mul(h, k))).collect()).collect();
        prop_assert!(two_cocycle_residual(&group, &eta) < 1e-12);
        let irreps = projective_irreps(&group, &eta, DEFAULT_SEED).unwrap();
        prop_assert_eq!(irreps.dim_sum_sq(), n);
        prop_assert!(irreps.orthogonality_residual() < 1e-8);
        prop_assert_eq!(irreps.len(), regular_count(&group, &eta));
        let plain = projective_irreps(&group, &raw, DEFAULT_SEED).unwrap();
        let dims = |s: &tubealg::gauging::ProjectiveIrrepSet| s.irreps.iter().map(|r| r.dim).collect::<Vec<_>>();
        prop_assert_eq!(dims(&irreps), dims(&plain));
    }

    #[test]
    fn wall_regauging_is_a_coboundary(idx in 0..GRADED.len(), angles in prop::collection::vec(0.0..std::f64::consts::TAU, 64)) {
        let cat = fixtures::fixture(GRADED[idx]).unwrap();
        let base = DefectTheory::build(&cat, DEFAULT_SEED, DEFAULT_TOL).unwrap();
        let ng = base.group.order();
        let lam: Vec<Vec<C64>> = (0..base.len())
            .map(|a| (0..ng).map(|h| if h == 0 { phase(0.0) } else { phase(angles[(a * ng + h) % angles.len()]) }).collect())
            .collect();
        let mut moved = base.clone();
        moved.regauge(&lam).unwrap();
        prop_assert!(moved.wall_residual < 1e-8);
        prop_assert!(moved.eta_cocycle_residual() < 1e-9);
        for a in 0..base.len() {
            for h in 0..ng {
                for k in 0..ng {
                    let hk = base.group.mul(h, k);
                    let want = base.eta[a][h][k] * lam[base.rho[k][a]][h] * lam[a][k] / lam[a][hk];
                    prop_assert!((moved.eta[a][h][k] - want).norm() < 1e-8);
                }
            }
            if let (Some(b0), Some(b1)) = (base.beta(a), moved.beta(a)) {
                for (r0, r1) in b0.iter().zip(&b1) {
                    for (x, y) in r0.iter().zip(r1) {
                        prop_assert!((x - y).norm() < 1e-8);
                    }
                }
            }
        }
    }
}
