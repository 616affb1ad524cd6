//! Block decomposition of finite *-algebras: center, irreducible central
//! idempotents (ICIs), block dimensions and matrix units.
//!
//! ICIs are found by drawing a seeded random Hermitian central element and
//! diagonalizing its left action on the center, using the positive trace form
//! `τ(x† y)` to make the problem Hermitian. Matrix units of a degenerate block
//! are obtained by splitting the block with the outer-label projectors
//! `T_{ppp}^0` (perturbed by a small random compression when a label occurs
//! more than once), followed by Lagrange interpolation for the minimal
//! projectors and normalized partial isometries `e_i x e_0`.

use serde::Serialize;

use crate::algebra::{random_vec, rng, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{
    argmax_abs, cluster_sorted, fix_first_phase, gram_hermitian_eigen, max_abs, null_space, range_basis, re, snap_phase,
    zeros, CMat, CVec, C64,
};
use crate::par;
use crate::tubes::{Tube, TubeAlgebra};

/// Absolute singular-value threshold used for null spaces and ranks.
pub const NULL_TOL: f64 = 1e-9;
/// Relative eigenvalue gap below which two eigenvalues are considered equal.
pub const CLUSTER_GAP: f64 = 1e-6;
/// Number of seeds tried before reporting a degenerate spectrum.
pub const SEED_RETRIES: u64 = 5;

/// One irreducible block.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    /// Canonical label.
    pub label: String,
    /// Irreducible central idempotent `I_a`.
    #[serde(skip)]
    pub idempotent: CVec,
    /// Block dimension `D_a` (the block is `D_a × D_a` matrices).
    pub dim: usize,
    /// Sector of the outer labels (0 when ungraded).
    pub sector: usize,
    /// Quantum dimension `d_a = Σ_p d_p t_a^{ppp0} / D_a`.
    pub qdim: f64,
    /// Topological spin `θ_a`.
    pub twist: C64,
    /// Matrix units `(I_a)_{ij}`; `[[I_a]]` when `D_a = 1`.
    #[serde(skip)]
    pub matrix_units: Vec<Vec<CVec>>,
}

/// Complete block decomposition of a tube (or dube) algebra.
#[derive(Clone, Debug, Serialize)]
pub struct BlockDecomposition {
    /// Blocks in canonical order (vacuum first).
    pub blocks: Vec<Block>,
    /// Index of the vacuum block, if the algebra has one.
    pub vacuum: Option<usize>,
    /// Normalisation `Σ d_s²` of the coefficient table.
    pub norm_dim_sq: f64,
    /// Seed used.
    pub seed: u64,
}

impl BlockDecomposition {
    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// Whether there are no blocks.
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Idempotents in order.
    pub fn idempotents(&self) -> Vec<CVec> {
        self.blocks.iter().map(|b| b.idempotent.clone()).collect()
    }

    /// Block dimensions in order.
    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    /// Index of the block with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == label)
    }

    /// Blocks in sector `g`.
    pub fn in_sector(&self, g: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.blocks[i].sector == g).collect()
    }

    /// Index of the block whose idempotent equals `x` within `tol` (relative
    /// to the size of `x`).
    pub fn find(&self, x: &CVec, tol: f64) -> Option<usize> {
        let scale = max_abs(x).max(1.0);
        self.blocks.iter().position(|b| max_abs(&(&b.idempotent - x)) < tol * scale)
    }
}

/// Orthonormal basis (columns) of the center of the algebra.
pub fn center_basis(alg: &FiniteAlgebra) -> CMat {
    null_space(&alg.commutator_matrix(), NULL_TOL)
}

/// All irreducible central idempotents of `alg`, in an arbitrary but
/// seed-determined order. Retries up to [`SEED_RETRIES`] seeds.
pub fn central_idempotents(alg: &FiniteAlgebra, seed: u64, tol: f64) -> Result<Vec<CVec>> {
    let z = center_basis(alg);
    let mut last = String::new();
    for attempt in 0..SEED_RETRIES {
        match idempotents_from_center(alg, &z, seed.wrapping_add(attempt), tol) {
            Ok(v) => return Ok(v),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::DegenerateSpectrum(last))
}

fn idempotents_from_center(alg: &FiniteAlgebra, z: &CMat, seed: u64, tol: f64) -> Result<Vec<CVec>> {
    let c = z.ncols();
    let mut rng = rng(seed);
    let w = random_vec(&mut rng, c);
    let zr = z * w;
    let h = &zr + alg.dag(&zr);
    let lh = alg.left_matrix(&h);
    // Z has Euclidean-orthonormal columns spanning an L_h-invariant subspace.
    let op = z.adjoint() * &lh * z;
    let cols: Vec<CVec> = (0..c).map(|i| z.column(i).into_owned()).collect();
    let daggers: Vec<CVec> = cols.iter().map(|x| alg.dag(x)).collect();
    let gram = CMat::from_fn(c, c, |i, j| alg.trace(&alg.mul(&daggers[i], &cols[j])));
    let (vals, vecs) = gram_hermitian_eigen(&gram, &op)
        .ok_or_else(|| Error::DegenerateSpectrum("trace form is not positive definite on the center".into()))?;
    let scale = vals.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let clusters = cluster_sorted(&vals, CLUSTER_GAP * scale);
    if clusters.len() != c {
        return Err(Error::DegenerateSpectrum(format!("seed {seed}: {} distinct eigenvalues for a {c}-dimensional center", clusters.len())));
    }
    let mut out = Vec::with_capacity(c);
    for k in 0..c {
        let v = z * vecs.column(k);
        let vv = alg.mul(&v, &v);
        let j = argmax_abs(&v);
        if vv[j].norm() < 1e-14 {
            return Err(Error::DegenerateSpectrum("eigenvector is nilpotent".into()));
        }
        let e = &v * (v[j] / vv[j]);
        let res = max_abs(&(alg.mul(&e, &e) - &e)).max(max_abs(&(alg.dag(&e) - &e)));
        if res > tol.max(1e-8) * max_abs(&e).max(1.0) {
            return Err(Error::NotIdempotent(format!("residual {res:e}")));
        }
        out.push(e);
    }
    let total: CVec = out.iter().fold(zeros(alg.dim()), |acc, e| acc + e);
    let res = max_abs(&(total - alg.unit()));
    if res > tol.max(1e-8) {
        return Err(Error::NotIdempotent(format!("idempotents do not sum to the unit: {res:e}")));
    }
    Ok(out)
}

/// Block dimension `D` from `τ(I) = D²`.
pub fn block_dim(alg: &FiniteAlgebra, e: &CVec) -> usize {
    alg.trace(e).re.max(0.0).sqrt().round() as usize
}

/// Ratio `λ` with `x ≈ λ y`, or `None` if `y` vanishes.
pub fn coefficient_ratio(x: &CVec, y: &CVec) -> Option<C64> {
    crate::linalg::ratio(x, y)
}

fn normalize_partial_isometry(alg: &FiniteAlgebra, n: &CVec, e0: &CVec) -> Option<CVec> {
    let nn = alg.mul(&alg.dag(n), n);
    let c = coefficient_ratio(&nn, e0)?.re;
    if c <= 1e-12 {
        return None;
    }
    Some(fix_first_phase(&(n / re(c.sqrt())), 1e-9))
}

/// Matrix units `(I)_{ij}` of a block of dimension `d` with central idempotent
/// `e`. `outer` lists the outer-label projectors used to split the block
/// (their compressions need not be minimal). Ordering of the minimal
/// projectors follows the order of `outer`.
pub fn matrix_units(alg: &FiniteAlgebra, e: &CVec, d: usize, outer: &[CVec], seed: u64) -> Result<Vec<Vec<CVec>>> {
    if d == 1 {
        return Ok(vec![vec![e.clone()]]);
    }
    let mut last = String::new();
    for attempt in 0..SEED_RETRIES {
        match matrix_units_attempt(alg, e, d, outer, seed.wrapping_add(attempt)) {
            Ok(u) => return Ok(u),
            Err(err) => last = err.to_string(),
        }
    }
    Err(Error::DegenerateSpectrum(format!("matrix units: {last}")))
}

fn block_spectrum(alg: &FiniteAlgebra, e: &CVec, z: &CVec) -> Result<Vec<f64>> {
    let le = alg.left_matrix(e);
    let u = range_basis(&le, 1e-8);
    let k = u.ncols();
    let op = u.adjoint() * alg.left_matrix(z) * &u;
    let cols: Vec<CVec> = (0..k).map(|i| u.column(i).into_owned()).collect();
    let daggers: Vec<CVec> = cols.iter().map(|x| alg.dag(x)).collect();
    let gram = CMat::from_fn(k, k, |i, j| alg.trace(&alg.mul(&daggers[i], &cols[j])));
    let (vals, _) = gram_hermitian_eigen(&gram, &op)
        .ok_or_else(|| Error::DegenerateSpectrum("trace form is not positive definite on the block".into()))?;
    Ok(vals)
}

fn matrix_units_attempt(alg: &FiniteAlgebra, e: &CVec, d: usize, outer: &[CVec], seed: u64) -> Result<Vec<Vec<CVec>>> {
    let mut rng = rng(seed);
    let comps: Vec<CVec> = outer.iter().map(|p| alg.mul(e, p)).filter(|q| max_abs(q) > 1e-9).collect();
    // Structured part: distinct integer weights per outer label.
    let mut z0 = zeros(alg.dim());
    for (i, q) in comps.iter().enumerate() {
        z0 += q * re(i as f64);
    }
    // Random Hermitian compressions inside each outer-label projector.
    let mut w = zeros(alg.dim());
    for q in &comps {
        let y = random_vec(&mut rng, alg.dim());
        let h = &y + alg.dag(&y);
        w += alg.mul(&alg.mul(q, &h), q);
    }
    let spread = block_spectrum(alg, e, &w)?.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let z = if spread > 1e-12 { z0 + w * re(0.25 / spread) } else { z0 };
    let vals = block_spectrum(alg, e, &z)?;
    let clusters = cluster_sorted(&vals, CLUSTER_GAP * vals.iter().map(|v| v.abs()).fold(1.0, f64::max));
    if clusters.len() != d || clusters.iter().any(|c| c.len() != d) {
        return Err(Error::DegenerateSpectrum(format!(
            "expected {d} eigenvalues of multiplicity {d}, found sizes {:?}",
            clusters.iter().map(|c| c.len()).collect::<Vec<_>>()
        )));
    }
    let lams: Vec<f64> = clusters.iter().map(|c| c.iter().map(|&i| vals[i]).sum::<f64>() / c.len() as f64).collect();
    let mut proj = Vec::with_capacity(d);
    for i in 0..d {
        let mut p = e.clone();
        for j in 0..d {
            if j != i {
                let f = (&z - e * re(lams[j])) / re(lams[i] - lams[j]);
                p = alg.mul(&p, &f);
            }
        }
        proj.push(p);
    }
    let x = random_vec(&mut rng, alg.dim());
    let mut col = vec![proj[0].clone()];
    for p in proj.iter().skip(1) {
        let n = alg.mul(&alg.mul(p, &x), &proj[0]);
        col.push(normalize_partial_isometry(alg, &n, &proj[0]).ok_or_else(|| Error::ZeroProjection("hopping element vanished".into()))?);
    }
    let units: Vec<Vec<CVec>> = (0..d).map(|i| (0..d).map(|j| alg.mul(&col[i], &alg.dag(&col[j]))).collect()).collect();
    let res = matrix_unit_residual(alg, &units, e);
    if res > 1e-7 {
        return Err(Error::NotIdempotent(format!("matrix-unit residual {res:e}")));
    }
    Ok(units)
}

/// `max` residual of `u_{ij} u_{kl} = δ_{jk} u_{il}`, `u_{ij}† = u_{ji}` and
/// `Σ_i u_{ii} = e`.
pub fn matrix_unit_residual(alg: &FiniteAlgebra, u: &[Vec<CVec>], e: &CVec) -> f64 {
    let d = u.len();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            worst = worst.max(max_abs(&(alg.dag(&u[i][j]) - &u[j][i])));
            for k in 0..d {
                for l in 0..d {
                    let lhs = alg.mul(&u[i][j], &u[k][l]);
                    let r = if j == k { max_abs(&(lhs - &u[i][l])) } else { max_abs(&lhs) };
                    worst = worst.max(r);
                }
            }
        }
    }
    let sum: CVec = (0..d).fold(zeros(alg.dim()), |acc, i| acc + &u[i][i]);
    worst.max(max_abs(&(sum - e)))
}

/// Outer-label projectors `T_{ppp}^0` in label order.
pub fn outer_projectors(t: &TubeAlgebra) -> Vec<CVec> {
    (0..t.category().rank()).filter_map(|p| t.tube(Tube { p, q: p, r: p, s: 0 })).collect()
}

/// Quantum dimension of a block: `d = Σ_p d_p t^{ppp0} / D` with `t` the
/// coefficients scaled by the normalisation `Σ d_s²`.
pub fn block_qdim(t: &TubeAlgebra, e: &CVec, dim: usize) -> f64 {
    let cat = t.category();
    let mut acc = 0.0;
    for (i, tube) in t.basis().iter().enumerate() {
        if tube.s == 0 && tube.p == tube.r && tube.q == tube.p {
            acc += cat.d(tube.p) * (e[i] * t.norm_dim_sq()).re;
        }
    }
    acc / dim as f64
}

/// Topological spin of a block idempotent living in the unrestricted tube
/// algebra `full`: `(Σ_p T_{p0p}^p) I = θ I`.
pub fn block_twist(full: &TubeAlgebra, e_full: &CVec) -> Result<C64> {
    let te = full.mul(&full.twist_element(), e_full);
    let theta = coefficient_ratio(&te, e_full).ok_or(Error::ZeroProjection("empty block".into()))?;
    Ok(theta)
}

/// Largest deviation of `T I` from a scalar multiple of `I`.
pub fn twist_scalar_residual(full: &TubeAlgebra, e_full: &CVec, theta: C64) -> f64 {
    max_abs(&(full.mul(&full.twist_element(), e_full) - e_full * theta))
}

/// Decompose a tube algebra. `full` is the unrestricted tube algebra used to
/// evaluate spins (pass `None` when `tubes` itself is unrestricted).
pub fn decompose(tubes: &TubeAlgebra, full: Option<&TubeAlgebra>, seed: u64, tol: f64) -> Result<BlockDecomposition> {
    let alg = tubes.algebra();
    let full = full.unwrap_or(tubes);
    let ids = central_idempotents(alg, seed, tol)?;
    let outer = outer_projectors(tubes);
    let graded = tubes.category().num_sectors() > 1 && tubes.s_sector().is_some();
    let blocks: Vec<Result<Block>> = par::map_slice(&ids, |e| {
        let dim = block_dim(alg, e);
        let sector = tubes.element_sector(e);
        // A twisted-sector defect is moved by the Dehn twist onto its own
        // domain wall `O^g_a`; in the gauge `O^g_a = T I_a` its spin is 1.
        let twist = if graded && sector != 0 {
            re(1.0)
        } else {
            let e_full = tubes.transfer(full, e);
            let twist = block_twist(full, &e_full)?;
            let res = twist_scalar_residual(full, &e_full, twist);
            if res > tol.max(1e-8) * 10.0 {
                return Err(Error::NonScalarT { block: 0, residual: res });
            }
            twist
        };
        let qdim = block_qdim(tubes, e, dim);
        let units = matrix_units(alg, e, dim, &outer, seed)?;
        Ok(Block { label: String::new(), idempotent: e.clone(), dim, sector, qdim, twist, matrix_units: units })
    });
    let mut blocks = blocks.into_iter().collect::<Result<Vec<_>>>()?;
    let total: usize = blocks.iter().map(|b| b.dim * b.dim).sum();
    if total != tubes.dim() {
        return Err(Error::DegenerateSpectrum(format!("Σ D² = {total} ≠ dim {}", tubes.dim())));
    }
    let vac = tubes.vacuum_element();
    canonical_sort(&mut blocks, &vac, graded);
    let vacuum = blocks
        .iter()
        .position(|b| max_abs(&(&b.idempotent - &vac)) < 1e-8);
    let names = tubes.category().grading().map(|g| g.group.clone());
    let mut counters = vec![0usize; tubes.category().num_sectors()];
    for (i, b) in blocks.iter_mut().enumerate() {
        if Some(i) == vacuum {
            b.label = "0".into();
            continue;
        }
        if graded && b.sector != 0 {
            let sname = names.as_ref().map_or("g".to_string(), |g| g.name(b.sector).to_string());
            b.label = format!("{sname}:{}", counters[b.sector]);
            counters[b.sector] += 1;
        } else {
            counters[0] += 1;
            b.label = format!("a{}", counters[0]);
        }
    }
    Ok(BlockDecomposition { blocks, vacuum, norm_dim_sq: tubes.norm_dim_sq(), seed })
}

/// Snapped spin as a fraction of a full turn, for sorting.
fn spin_turns(theta: C64) -> f64 {
    match snap_phase(theta / theta.norm(), 48, 1e-7) {
        Some((p, q)) => p as f64 / q as f64,
        None => {
            let t = theta.arg() / (2.0 * std::f64::consts::PI);
            if t < 0.0 {
                t + 1.0
            } else {
                t
            }
        }
    }
}

/// Sort blocks canonically: vacuum first, then (when `by_sector`) by sector,
/// then quantum dimension, snapped spin, smallest support tube and
/// (descending) coefficient vector.
pub fn canonical_sort(blocks: &mut [Block], vacuum: &CVec, by_sector: bool) {
    let key = |b: &Block| {
        let is_vac = max_abs(&(&b.idempotent - vacuum)) < 1e-8;
        let support = crate::linalg::first_nonzero(&b.idempotent, 1e-9).unwrap_or(usize::MAX);
        (!is_vac, if by_sector { b.sector } else { 0 }, (b.qdim * 1e6).round() as i64, (spin_turns(b.twist) * 1e6).round() as i64, support)
    };
    blocks.sort_by(|a, b| {
        key(a).cmp(&key(b)).then_with(|| {
            // Descending coefficient vector.
            for (x, y) in a.idempotent.iter().zip(b.idempotent.iter()) {
                let (xr, yr) = ((x.re * 1e9).round(), (y.re * 1e9).round());
                if xr != yr {
                    return yr.partial_cmp(&xr).unwrap();
                }
                let (xi, yi) = ((x.im * 1e9).round(), (y.im * 1e9).round());
                if xi != yi {
                    return yi.partial_cmp(&xi).unwrap();
                }
            }
            std::cmp::Ordering::Equal
        })
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{ising, vec_g_omega, FiniteGroup, ThreeCocycle};

    fn toric() -> TubeAlgebra {
        TubeAlgebra::build(&vec_g_omega(&ThreeCocycle::trivial(&FiniteGroup::cyclic(2))).unwrap(), None)
    }

    #[test]
    fn toric_code_has_four_abelian_blocks() {
        let t = toric();
        let dec = decompose(&t, None, 1, 1e-8).unwrap();
        assert_eq!(dec.block_dims(), vec![1, 1, 1, 1]);
        assert_eq!(dec.vacuum, Some(0));
        let v = &dec.blocks[0].idempotent;
        assert!((v[0] - re(0.5)).norm() < 1e-12);
    }

    #[test]
    fn ising_block_structure() {
        let t = TubeAlgebra::build(&ising(1).unwrap(), None);
        let dec = decompose(&t, None, 3, 1e-8).unwrap();
        let mut dims = dec.block_dims();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 1, 1, 1, 1, 1, 1, 2]);
        let big = dec.blocks.iter().find(|b| b.dim == 2).unwrap();
        assert!(matrix_unit_residual(t.algebra(), &big.matrix_units, &big.idempotent) < 1e-9);
        assert!((big.qdim - 2.0).abs() < 1e-9);
    }

    #[test]
    fn seed_independence() {
        let t = TubeAlgebra::build(&ising(1).unwrap(), None);
        let a = decompose(&t, None, 1, 1e-8).unwrap();
        let b = decompose(&t, None, 99, 1e-8).unwrap();
        for (x, y) in a.blocks.iter().zip(&b.blocks) {
            assert!(max_abs(&(&x.idempotent - &y.idempotent)) < 1e-9);
        }
    }
}
