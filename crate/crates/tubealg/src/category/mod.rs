//! Unitary fusion category data: labels, duals, multiplicity-free fusion,
//! quantum dimensions, F-symbols, Frobenius–Schur data and optional grading.
//!
//! F-symbols follow the convention `F^{abc}_{d;e,f}` with `e ∈ a×b`,
//! `d ∈ e×c`, `f ∈ b×c`, `d ∈ a×f`; the pentagon equation checked is
//! `F^{pcd}_{e;q,r} F^{abr}_{e;p,s} = Σ_x F^{abc}_{q;p,x} F^{axd}_{e;q,s} F^{bcd}_{s;x,r}`.

pub mod builders;
pub mod cocycle;
pub mod group;
pub mod json;
pub mod validate;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{re, C64};

pub use builders::{builtin_extension, ising, regrade_by_quotient, restrict_to_subgroup, shift_by_3cocycle, vec_g_omega};
pub use cocycle::ThreeCocycle;
pub use group::FiniteGroup;
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

/// Tolerance used for structural numeric checks on category data.
pub const CATEGORY_TOL: f64 = 1e-9;

/// A grading of the simple objects by a finite group.
#[derive(Clone, Debug, PartialEq)]
pub struct Grading {
    /// The grading group.
    pub group: FiniteGroup,
    /// `sector[a]` is the group element labelling the sector of object `a`.
    pub sector: Vec<usize>,
}

/// Input data of a multiplicity-free unitary fusion category.
#[derive(Clone, Debug)]
pub struct FusionCategory {
    labels: Vec<String>,
    dual: Vec<usize>,
    fusion: Vec<bool>,
    products: Vec<Vec<usize>>,
    qdim: Vec<f64>,
    f: HashMap<u64, C64>,
    kappa: Vec<C64>,
    grading: Option<Grading>,
}

/// Raw description used to assemble a [`FusionCategory`].
#[derive(Clone, Debug, Default)]
pub struct CategorySpec {
    /// Object names; index 0 must be the unit.
    pub labels: Vec<String>,
    /// Dual map.
    pub dual: Vec<usize>,
    /// Admissible triples `(a, b, c)` meaning `N_{ab}^c = 1`.
    pub fusion: Vec<(usize, usize, usize)>,
    /// Optional user-supplied quantum dimensions (cross-checked).
    pub qdim: Option<Vec<f64>>,
    /// Explicit F entries `(a,b,c,d,e,f) → value`.
    pub f: Vec<([usize; 6], C64)>,
    /// Default missing admissible F entries to 1.
    pub trivial_f: bool,
    /// Optional grading.
    pub grading: Option<Grading>,
}

#[inline]
fn key6(n: usize, k: [usize; 6]) -> u64 {
    k.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64)
}

impl FusionCategory {
    /// Assemble and structurally check a category. Numeric axioms
    /// (pentagon, unitarity, …) are checked separately by [`validate`].
    pub fn from_spec(spec: CategorySpec) -> Result<Self> {
        let n = spec.labels.len();
        if n == 0 {
            return Err(Error::Malformed("category has no objects".into()));
        }
        if spec.dual.len() != n {
            return Err(Error::Malformed("dual map has the wrong length".into()));
        }
        for a in 0..n {
            let b = spec.dual[a];
            if b >= n {
                return Err(Error::Malformed(format!("dual of `{}` is out of range", spec.labels[a])));
            }
            if spec.dual[b] != a {
                return Err(Error::Malformed(format!("dual map is not involutive at `{}`", spec.labels[a])));
            }
        }
        if spec.dual[0] != 0 {
            return Err(Error::Malformed("the unit must be self-dual".into()));
        }
        let mut fusion = vec![false; n * n * n];
        for &(a, b, c) in &spec.fusion {
            if a >= n || b >= n || c >= n {
                return Err(Error::Malformed("fusion triple out of range".into()));
            }
            fusion[(a * n + b) * n + c] = true;
        }
        let products = (0..n * n)
            .map(|ab| (0..n).filter(|&c| fusion[ab * n + c]).collect())
            .collect();
        let mut cat = Self {
            labels: spec.labels,
            dual: spec.dual,
            fusion,
            products,
            qdim: vec![1.0; n],
            f: HashMap::new(),
            kappa: vec![re(1.0); n],
            grading: spec.grading,
        };
        if let Some(g) = &cat.grading {
            if g.sector.len() != n {
                return Err(Error::Malformed("grading sector map has the wrong length".into()));
            }
            if g.sector.iter().any(|&s| s >= g.group.order()) {
                return Err(Error::Malformed("grading sector out of range".into()));
            }
        }
        cat.qdim = cat.perron_frobenius_dims();
        if let Some(q) = spec.qdim {
            if q.len() != n {
                return Err(Error::Malformed("qdim has the wrong length".into()));
            }
            for a in 0..n {
                if (q[a] - cat.qdim[a]).abs() > 1e-6 {
                    return Err(Error::Malformed(format!(
                        "qdim of `{}` is {} but the fusion rules give {}",
                        cat.labels[a], q[a], cat.qdim[a]
                    )));
                }
            }
        }
        for (k, v) in spec.f {
            if k.iter().any(|&x| x >= n) {
                return Err(Error::Malformed("F index out of range".into()));
            }
            cat.f.insert(key6(n, k), v);
        }
        if spec.trivial_f {
            for k in cat.admissible_f_indices() {
                cat.f.entry(key6(n, k)).or_insert(re(1.0));
            }
        } else {
            for k in cat.admissible_f_indices() {
                if !cat.f.contains_key(&key6(n, k)) {
                    return Err(Error::Malformed(format!(
                        "missing F entry {}",
                        k.iter().map(|&x| cat.labels[x].as_str()).collect::<Vec<_>>().join(",")
                    )));
                }
            }
        }
        cat.kappa = (0..n)
            .map(|a| {
                let v = cat.f(a, cat.dual[a], a, a, 0, 0);
                if v.norm() == 0.0 {
                    re(1.0)
                } else {
                    v / v.norm()
                }
            })
            .collect();
        Ok(cat)
    }

    fn perron_frobenius_dims(&self) -> Vec<f64> {
        let n = self.rank();
        // Power iteration on I + Σ_a N_a, which is primitive for a fusion ring.
        let mut v = vec![1.0; n];
        for _ in 0..2000 {
            let mut w = v.clone();
            for a in 0..n {
                for b in 0..n {
                    for &c in self.fuse(a, b) {
                        w[c] += v[b];
                    }
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let w: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = w;
            if diff < 1e-15 {
                break;
            }
        }
        let v0 = v[0];
        v.iter().map(|x| x / v0).collect()
    }

    /// Number of simple objects.
    #[inline]
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Object names.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Name of object `a`.
    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Index of a named object.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Dual object `ā`.
    #[inline]
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    /// `N_{ab}^c ∈ {0, 1}`.
    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.rank();
        self.fusion[(a * n + b) * n + c]
    }

    /// Objects `c` with `N_{ab}^c = 1`.
    #[inline]
    pub fn fuse(&self, a: usize, b: usize) -> &[usize] {
        &self.products[a * self.rank() + b]
    }

    /// Quantum dimension `d_a`.
    #[inline]
    pub fn d(&self, a: usize) -> f64 {
        self.qdim[a]
    }

    /// All quantum dimensions.
    pub fn qdims(&self) -> &[f64] {
        &self.qdim
    }

    /// Total dimension `D² = Σ_a d_a²`.
    pub fn total_dim_sq(&self) -> f64 {
        self.qdim.iter().map(|d| d * d).sum()
    }

    /// `F^{abc}_{d;e,f}`; zero off the stored support.
    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        self.f.get(&key6(self.rank(), [a, b, c, d, e, f])).copied().unwrap_or_default()
    }

    /// Stored F entries (index tuple, value), sorted by index.
    pub fn f_entries(&self) -> Vec<([usize; 6], C64)> {
        let n = self.rank() as u64;
        let mut out: Vec<([usize; 6], C64)> = self
            .f
            .iter()
            .map(|(&k, &v)| {
                let mut idx = [0usize; 6];
                let mut x = k;
                for slot in idx.iter_mut().rev() {
                    *slot = (x % n) as usize;
                    x /= n;
                }
                (idx, v)
            })
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Replace an F entry (used for constructing perturbed inputs in tests).
    pub fn set_f(&mut self, idx: [usize; 6], value: C64) {
        let n = self.rank();
        self.f.insert(key6(n, idx), value);
        let a = idx[0];
        if idx[1] == self.dual[a] && idx[2] == a && idx[3] == a && idx[4] == 0 && idx[5] == 0 && value.norm() > 0.0 {
            self.kappa[a] = value / value.norm();
        }
    }

    /// Whether `(a,b,c,d,e,f)` is on the admissibility support.
    pub fn f_admissible(&self, k: [usize; 6]) -> bool {
        let [a, b, c, d, e, f] = k;
        self.n(a, b, e) && self.n(e, c, d) && self.n(b, c, f) && self.n(a, f, d)
    }

    /// All admissible F index tuples.
    pub fn admissible_f_indices(&self) -> Vec<[usize; 6]> {
        let n = self.rank();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for &e in self.fuse(a, b) {
                        for &d in self.fuse(e, c) {
                            for &f in self.fuse(b, c) {
                                if self.n(a, f, d) {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Phase `κ_a = F^{aāa}_{a;0,0} / |F^{aāa}_{a;0,0}|` (the Frobenius–Schur
    /// indicator for self-dual `a`).
    #[inline]
    pub fn kappa(&self, a: usize) -> C64 {
        self.kappa[a]
    }

    /// Bending coefficient `A^{ab}_c = √(d_a d_b / d_c) · conj(F^{āab}_{b;0,c})`.
    #[inline]
    pub fn bend_a(&self, a: usize, b: usize, c: usize) -> C64 {
        (self.d(a) * self.d(b) / self.d(c)).sqrt() * self.f(self.dual(a), a, b, b, 0, c).conj()
    }

    /// Bending coefficient `B^{ab}_c = √(d_a d_b / d_c) · F^{abb̄}_{a;c,0}`.
    #[inline]
    pub fn bend_b(&self, a: usize, b: usize, c: usize) -> C64 {
        (self.d(a) * self.d(b) / self.d(c)).sqrt() * self.f(a, b, self.dual(b), a, c, 0)
    }

    /// Optional grading.
    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// Sector of object `a` (0 when ungraded).
    #[inline]
    pub fn sector(&self, a: usize) -> usize {
        self.grading.as_ref().map_or(0, |g| g.sector[a])
    }

    /// Number of sectors (1 when ungraded).
    pub fn num_sectors(&self) -> usize {
        self.grading.as_ref().map_or(1, |g| g.group.order())
    }

    /// Objects in sector `g`.
    pub fn sector_objects(&self, g: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&a| self.sector(a) == g).collect()
    }

    /// `D_g² = Σ_{a∈C_g} d_a²`.
    pub fn sector_dim_sq(&self, g: usize) -> f64 {
        self.sector_objects(g).iter().map(|&a| self.d(a) * self.d(a)).sum()
    }

    /// Same data with the grading replaced.
    pub fn with_grading(&self, grading: Option<Grading>) -> Result<Self> {
        if let Some(g) = &grading {
            if g.sector.len() != self.rank() {
                return Err(Error::Malformed("grading sector map has the wrong length".into()));
            }
        }
        let mut out = self.clone();
        out.grading = grading;
        Ok(out)
    }

    /// Same data with objects renamed.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::Malformed("label list has the wrong length".into()));
        }
        let mut out = self.clone();
        out.labels = labels;
        Ok(out)
    }

    /// Largest entrywise difference between two categories with the same
    /// labels (F, fusion, duals, grading); `None` if structurally different.
    pub fn max_difference(&self, other: &FusionCategory) -> Option<f64> {
        if self.labels != other.labels
            || self.dual != other.dual
            || self.fusion != other.fusion
            || self.grading != other.grading
        {
            return None;
        }
        let mut worst: f64 = 0.0;
        for k in self.admissible_f_indices() {
            let [a, b, c, d, e, f] = k;
            worst = worst.max((self.f(a, b, c, d, e, f) - other.f(a, b, c, d, e, f)).norm());
        }
        for a in 0..self.rank() {
            worst = worst.max((self.d(a) - other.d(a)).abs());
        }
        Some(worst)
    }

    /// Full subcategory on the given objects (which must contain the unit
    /// and be closed under fusion and duals). The grading is dropped.
    pub fn subcategory(&self, objects: &[usize]) -> Result<Self> {
        let mut new = vec![usize::MAX; self.rank()];
        let mut objs = objects.to_vec();
        objs.sort_unstable();
        objs.dedup();
        if objs.first() != Some(&0) {
            return Err(Error::Malformed("subcategory must contain the unit".into()));
        }
        for (i, &a) in objs.iter().enumerate() {
            new[a] = i;
        }
        let inside = |a: usize| new[a] != usize::MAX;
        let mut fusion = Vec::new();
        for &a in &objs {
            if !inside(self.dual(a)) {
                return Err(Error::Malformed(format!("subcategory not closed under duals at `{}`", self.label(a))));
            }
            for &b in &objs {
                for &c in self.fuse(a, b) {
                    if !inside(c) {
                        return Err(Error::Malformed(format!("subcategory not closed under fusion at `{}`", self.label(c))));
                    }
                    fusion.push((new[a], new[b], new[c]));
                }
            }
        }
        let f = self
            .f_entries()
            .into_iter()
            .filter(|(k, _)| k.iter().all(|&x| inside(x)))
            .map(|(k, v)| (k.map(|x| new[x]), v))
            .collect();
        Self::from_spec(CategorySpec {
            labels: objs.iter().map(|&a| self.labels[a].clone()).collect(),
            dual: objs.iter().map(|&a| new[self.dual(a)]).collect(),
            fusion,
            qdim: None,
            f,
            trivial_f: false,
            grading: None,
        })
    }

    /// The trivial sector `C_1` as a category in its own right.
    pub fn trivial_sector(&self) -> Result<Self> {
        self.subcategory(&self.sector_objects(0))
    }

    /// Structural data for rebuilding (used by transformations).
    pub fn to_spec(&self) -> CategorySpec {
        let n = self.rank();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for &c in self.fuse(a, b) {
                    fusion.push((a, b, c));
                }
            }
        }
        CategorySpec {
            labels: self.labels.clone(),
            dual: self.dual.clone(),
            fusion,
            qdim: None,
            f: self.f_entries(),
            trivial_f: false,
            grading: self.grading.clone(),
        }
    }
}
