//! Generic finite-dimensional *-algebras given by sparse structure constants.
//!
//! Elements are coefficient vectors over a fixed basis `e_i`; the product is
//! `e_i e_j = Σ_k c(i,j,k) e_k` and the antilinear involution is
//! `x† = Σ_i conj(x_i) Σ_k D(i,k) e_k`. The canonical trace is the regular
//! trace `τ(x) = Tr L_x`, whose form `τ(x† y)` is positive definite for a
//! C*-algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{max_abs, re, zeros, CMat, CVec, C64};
use crate::par;

/// Sparse row: list of `(index, value)` pairs.
pub type SparseRow = Vec<(usize, C64)>;

/// A finite-dimensional algebra with involution.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    dim: usize,
    table: Vec<SparseRow>,
    dagger: Vec<SparseRow>,
    unit: CVec,
    trace_fn: CVec,
}

/// Seeded random source used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex vector with entries uniform in the unit square.
pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

impl FiniteAlgebra {
    /// Assemble an algebra from its structure constants (`table[i*dim+j]`
    /// lists `(k, c(i,j,k))`), involution rows and unit.
    pub fn new(dim: usize, table: Vec<SparseRow>, dagger: Vec<SparseRow>, unit: CVec) -> Self {
        assert_eq!(table.len(), dim * dim, "structure table has the wrong size");
        assert_eq!(dagger.len(), dim, "dagger table has the wrong size");
        let mut trace_fn = zeros(dim);
        for k in 0..dim {
            for i in 0..dim {
                for &(kk, v) in &table[k * dim + i] {
                    if kk == i {
                        trace_fn[k] += v;
                    }
                }
            }
        }
        Self { dim, table, dagger, unit, trace_fn }
    }

    /// Dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Unit element.
    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    /// Basis vector `e_i`.
    pub fn basis(&self, i: usize) -> CVec {
        let mut v = zeros(self.dim);
        v[i] = re(1.0);
        v
    }

    /// Structure constants of `e_i e_j`.
    #[inline]
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.table[i * self.dim + j]
    }

    /// Overwrite one structure constant (for fault-injection tests).
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, value: C64) {
        let row = &mut self.table[i * self.dim + j];
        match row.iter_mut().find(|(kk, _)| *kk == k) {
            Some(slot) => slot.1 = value,
            None => row.push((k, value)),
        }
    }

    /// Product `xy`.
    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        let mut out = zeros(self.dim);
        let ynz: Vec<(usize, C64)> = y.iter().enumerate().filter(|(_, v)| v.norm() != 0.0).map(|(j, &v)| (j, v)).collect();
        for (i, &xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for &(j, yj) in &ynz {
                let w = xi * yj;
                for &(k, c) in &self.table[i * self.dim + j] {
                    out[k] += w * c;
                }
            }
        }
        out
    }

    /// Involution `x†`.
    pub fn dag(&self, x: &CVec) -> CVec {
        let mut out = zeros(self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            let xc = xi.conj();
            for &(k, d) in &self.dagger[i] {
                out[k] += xc * d;
            }
        }
        out
    }

    /// Regular trace `τ(x) = Tr L_x`.
    pub fn trace(&self, x: &CVec) -> C64 {
        x.iter().zip(self.trace_fn.iter()).map(|(a, b)| a * b).sum()
    }

    /// Trace functional coefficients `τ(e_k)`.
    pub fn trace_functional(&self) -> &CVec {
        &self.trace_fn
    }

    /// Inner product `⟨x, y⟩ = τ(x† y)`.
    pub fn inner(&self, x: &CVec, y: &CVec) -> C64 {
        self.trace(&self.mul(&self.dag(x), y))
    }

    /// Matrix of left multiplication by `x` (column `j` is `x e_j`).
    pub fn left_matrix(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                for &(k, c) in &self.table[i * self.dim + j] {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// Matrix of right multiplication by `x` (column `i` is `e_i x`).
    pub fn right_matrix(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (j, &xj) in x.iter().enumerate() {
            if xj.norm() == 0.0 {
                continue;
            }
            for i in 0..self.dim {
                for &(k, c) in &self.table[i * self.dim + j] {
                    m[(k, i)] += xj * c;
                }
            }
        }
        m
    }

    /// Commutator constraint matrix: `x` is central iff `A x = 0`.
    /// Rows are indexed by `(j, k)`: `(x e_j − e_j x)_k`.
    pub fn commutator_matrix(&self) -> CMat {
        let m = self.dim;
        let mut a = CMat::zeros(m * m, m);
        for i in 0..m {
            for j in 0..m {
                for &(k, c) in &self.table[i * m + j] {
                    a[(j * m + k, i)] += c;
                }
                for &(k, c) in &self.table[j * m + i] {
                    a[(j * m + k, i)] -= c;
                }
            }
        }
        a
    }

    /// Residuals of the C*-algebra axioms.
    pub fn verify_cstar(&self, seed: u64, samples: usize) -> CStarReport {
        let m = self.dim;
        // Exhaustive associativity on basis triples, in parallel over `i`.
        let per_i = par::map_range(m, |i| {
            let ei = self.basis(i);
            let mut worst = (0.0f64, [i, 0, 0]);
            for j in 0..m {
                let ij = self.mul(&ei, &self.basis(j));
                for k in 0..m {
                    let ek = self.basis(k);
                    let lhs = self.mul(&ij, &ek);
                    let rhs = self.mul(&ei, &self.mul(&self.basis(j), &ek));
                    let r = max_abs(&(lhs - rhs));
                    if r > worst.0 {
                        worst = (r, [i, j, k]);
                    }
                }
            }
            worst
        });
        let (assoc, worst_triple) =
            per_i.into_iter().fold((0.0, [0, 0, 0]), |acc, w| if w.0 > acc.0 { w } else { acc });
        let mut rng = rng(seed);
        let mut unit_res: f64 = 0.0;
        let mut anti: f64 = 0.0;
        let mut invol: f64 = 0.0;
        let mut adj: f64 = 0.0;
        for _ in 0..samples {
            let x = random_vec(&mut rng, m);
            let y = random_vec(&mut rng, m);
            let z = random_vec(&mut rng, m);
            unit_res = unit_res.max(max_abs(&(self.mul(&self.unit, &x) - &x)));
            unit_res = unit_res.max(max_abs(&(self.mul(&x, &self.unit) - &x)));
            let xy = self.mul(&x, &y);
            anti = anti.max(max_abs(&(self.dag(&xy) - self.mul(&self.dag(&y), &self.dag(&x)))));
            invol = invol.max(max_abs(&(self.dag(&self.dag(&x)) - &x)));
            // ⟨x y, z⟩ = ⟨y, x† z⟩
            let l = self.inner(&xy, &z);
            let r = self.inner(&y, &self.mul(&self.dag(&x), &z));
            adj = adj.max((l - r).norm() / (1.0 + l.norm()));
        }
        let gram = self.gram();
        let herm = (&gram + gram.adjoint()) * re(0.5);
        let herm_res = crate::linalg::max_abs_mat(&(&gram - gram.adjoint()));
        let min_eig = nalgebra::SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        CStarReport {
            associativity: assoc,
            associativity_worst: worst_triple,
            unit: unit_res,
            dagger_antihomomorphism: anti,
            dagger_involution: invol,
            dagger_adjoint: adj,
            trace_form_hermiticity: herm_res,
            trace_form_min_eigenvalue: min_eig,
        }
    }

    /// Gram matrix `G_ij = τ(e_i† e_j)` of the trace form.
    pub fn gram(&self) -> CMat {
        let m = self.dim;
        let daggers: Vec<CVec> = (0..m).map(|i| self.dag(&self.basis(i))).collect();
        let cols = par::map_range(m, |j| {
            let ej = self.basis(j);
            (0..m).map(|i| self.trace(&self.mul(&daggers[i], &ej))).collect::<Vec<_>>()
        });
        CMat::from_fn(m, m, |i, j| cols[j][i])
    }
}

/// Residuals of the C*-algebra axioms for a [`FiniteAlgebra`].
#[derive(Clone, Debug, Serialize)]
pub struct CStarReport {
    /// `max |(e_i e_j) e_k − e_i (e_j e_k)|` over basis triples.
    pub associativity: f64,
    /// Basis triple attaining the associativity residual.
    pub associativity_worst: [usize; 3],
    /// Two-sided unit residual on random vectors.
    pub unit: f64,
    /// `(xy)† − y† x†` residual on random vectors.
    pub dagger_antihomomorphism: f64,
    /// `(x†)† − x` residual on random vectors.
    pub dagger_involution: f64,
    /// Relative residual of `⟨xy, z⟩ = ⟨y, x† z⟩`.
    pub dagger_adjoint: f64,
    /// Non-Hermiticity of the trace-form Gram matrix.
    pub trace_form_hermiticity: f64,
    /// Smallest eigenvalue of the trace-form Gram matrix (must be positive).
    pub trace_form_min_eigenvalue: f64,
}

impl CStarReport {
    /// Largest residual among the algebraic axioms.
    pub fn max_residual(&self) -> f64 {
        [
            self.associativity,
            self.unit,
            self.dagger_antihomomorphism,
            self.dagger_involution,
            self.dagger_adjoint,
            self.trace_form_hermiticity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Whether all axioms hold at `tol` and the trace form is positive definite.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() < tol && self.trace_form_min_eigenvalue > 0.0
    }
}
