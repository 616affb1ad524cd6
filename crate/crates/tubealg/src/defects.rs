//! Symmetry defects of a graded category: the dube decomposition into
//! defect sectors, domain walls `O^h_a`, the permutation action `ρ`, the
//! projective phases `η_a(h,k)`, twisted-sector dimensions and the
//! G-crossed S/T matrices.
//!
//! Gauge conventions for the walls (`g` the sector of `a`):
//!
//! * `O^1_a = I_a`;
//! * `O^g_a = T I_a` with `T = Σ_p T_{p0p}^p` the Dehn twist, so every
//!   twisted-sector defect has spin 1 and `η_a(g,g)` carries the spin data;
//! * `O^h_0 = ω_h I_0`, normalized, with `ω_h = Σ_{s∈C_h} d_s T_{0s0}^s`;
//! * every other wall is `Σ_i (I_b)_{i0} w (I_a)_{0i}` with `w` the normalized
//!   compression `(I_b)_{00} X (I_a)_{00}` of a seeded generic combination `X`
//!   of sector-`h` tubes, and its first nonzero coefficient made real positive.

use serde::Serialize;

use crate::algebra::{random_vec, rng};
use crate::category::{FiniteGroup, FusionCategory};
use crate::error::{Error, Result};
use crate::linalg::{fix_first_phase, max_abs, re, zeros, CMat, CVec, C64};
use crate::modular::ModularData;
use crate::par;
use crate::spectra::{decompose, BlockDecomposition, SEED_RETRIES};
use crate::tubes::TubeAlgebra;

/// Tolerance for matching an element against a defect idempotent.
pub const MATCH_TOL: f64 = 1e-7;

/// A symmetry-enriched theory extracted from a graded category.
#[derive(Clone, Debug)]
pub struct DefectTheory {
    full: TubeAlgebra,
    dube: TubeAlgebra,
    /// Grading group.
    pub group: FiniteGroup,
    /// Decomposition of the dube algebra (all sectors).
    pub dec: BlockDecomposition,
    /// Defect idempotents embedded in the full tube algebra.
    pub ici: Vec<CVec>,
    /// Matrix units of each defect, embedded in the full tube algebra.
    pub units: Vec<Vec<Vec<CVec>>>,
    /// Domain walls `walls[a][h] = O^h_a`.
    pub walls: Vec<Vec<CVec>>,
    /// Permutation action `rho[h][a] = ρ_h(a)`.
    pub rho: Vec<Vec<usize>>,
    /// Projective phases `eta[a][h][k] = η_a(h,k)`, defined by
    /// `O^h_{ρ_k a} O^k_a = η_a(h,k) O^{hk}_a`.
    pub eta: Vec<Vec<Vec<C64>>>,
    /// Largest residual of the wall relations (unitarity, permutation, η).
    pub wall_residual: f64,
    /// Seed used.
    pub seed: u64,
}

/// G-crossed modular matrices, indexed by the invariant pairs `(a, h)` with
/// `ρ_h(a) = a` (the domain-wall states `O^h_a`).
#[derive(Clone, Debug, Serialize)]
pub struct GCrossed {
    /// Row/column keys `(defect, group element)`.
    pub keys: Vec<(usize, usize)>,
    /// `S_{(a,h),(b,ḡ)} = D_b Tr[(O^ḡ_b)† S(O^h_a)] / (D_a Tr[(O^ḡ_b)† O^ḡ_b])`.
    #[serde(skip)]
    pub s: CMat,
    /// Action matrix of T: `T(O^h_a) = t[(a,gh),(a,h)] O^{gh}_a`.
    #[serde(skip)]
    pub t: CMat,
    /// Raw traces `Tr[O_j† S(O_i)]` (row `i`, column `j`), used for gauging.
    #[serde(skip)]
    pub traces: CMat,
}

impl GCrossed {
    /// Position of a key.
    pub fn index_of(&self, a: usize, h: usize) -> Option<usize> {
        self.keys.iter().position(|&k| k == (a, h))
    }
}

fn random_sector_tubes(full: &TubeAlgebra, h: usize, seed: u64) -> CVec {
    let mut r = rng(seed);
    let x = random_vec(&mut r, full.dim());
    let cat = full.category();
    CVec::from_fn(full.dim(), |i, _| if cat.sector(full.basis()[i].s) == h { x[i] } else { re(0.0) })
}

impl DefectTheory {
    /// Decompose the dube algebra of a graded category and compute all
    /// domain walls, the permutation action and the projective phases.
    pub fn build(cat: &FusionCategory, seed: u64, tol: f64) -> Result<Self> {
        let group = cat
            .grading()
            .map(|g| g.group.clone())
            .unwrap_or_else(FiniteGroup::trivial);
        let full = TubeAlgebra::build(cat, None);
        let dube = TubeAlgebra::build(cat, Some(0));
        let dec = decompose(&dube, Some(&full), seed, tol)?;
        let ici: Vec<CVec> = dec.blocks.iter().map(|b| dube.transfer(&full, &b.idempotent)).collect();
        let units: Vec<Vec<Vec<CVec>>> = dec
            .blocks
            .iter()
            .map(|b| b.matrix_units.iter().map(|row| row.iter().map(|u| dube.transfer(&full, u)).collect()).collect())
            .collect();
        let mut theory = DefectTheory {
            full,
            dube,
            group,
            dec,
            ici,
            units,
            walls: Vec::new(),
            rho: Vec::new(),
            eta: Vec::new(),
            wall_residual: 0.0,
            seed,
        };
        theory.compute_walls()?;
        theory.compute_eta();
        Ok(theory)
    }

    /// Unrestricted tube algebra.
    pub fn full(&self) -> &TubeAlgebra {
        &self.full
    }

    /// Dube algebra.
    pub fn dube(&self) -> &TubeAlgebra {
        &self.dube
    }

    /// Underlying category.
    pub fn category(&self) -> &FusionCategory {
        self.full.category()
    }

    /// Number of defects (all sectors).
    pub fn len(&self) -> usize {
        self.dec.len()
    }

    /// Whether there are no defects.
    pub fn is_empty(&self) -> bool {
        self.dec.is_empty()
    }

    /// Defect labels.
    pub fn labels(&self) -> Vec<String> {
        self.dec.blocks.iter().map(|b| b.label.clone()).collect()
    }

    /// Sector of defect `a`.
    pub fn sector(&self, a: usize) -> usize {
        self.dec.blocks[a].sector
    }

    /// Block dimension `D_a`.
    pub fn block_dim(&self, a: usize) -> usize {
        self.dec.blocks[a].dim
    }

    /// Quantum dimension `d_a`.
    pub fn qdim(&self, a: usize) -> f64 {
        self.dec.blocks[a].qdim
    }

    /// Index of the vacuum defect.
    pub fn vacuum(&self) -> usize {
        self.dec.vacuum.unwrap_or(0)
    }

    fn find(&self, x: &CVec) -> Option<usize> {
        let scale = max_abs(x).max(1.0);
        self.ici.iter().position(|e| max_abs(&(e - x)) < MATCH_TOL * scale)
    }

    /// Compute `O^h_a` and the defect `b = ρ_h(a)` it maps onto.
    fn wall(&self, a: usize, h: usize) -> Result<(CVec, usize)> {
        let full = &self.full;
        let g = self.sector(a);
        let e = &self.ici[a];
        if h == 0 {
            return Ok((e.clone(), a));
        }
        let special = if h == g {
            Some(full.mul(&full.twist_element(), e))
        } else if a == self.vacuum() {
            Some(full.mul(&full.omega(h), e)).filter(|x| max_abs(x) > 1e-9)
        } else {
            None
        };
        if let Some(x) = special {
            let n = full.mul(&full.dag(&x), &x);
            let c = crate::linalg::ratio(&n, e).map(|c| c.re).unwrap_or(0.0);
            if c <= 1e-12 {
                return Err(Error::ZeroProjection(format!("wall {h} on defect {a}")));
            }
            let o = &x / re(c.sqrt());
            let b = self
                .find(&full.mul(&o, &full.dag(&o)))
                .ok_or_else(|| Error::NoMatchingIci(format!("image of defect {a} under {h}")))?;
            return Ok((o, b));
        }
        let target = self.group.conj_by(h, g);
        let mut last = String::new();
        for attempt in 0..SEED_RETRIES {
            let s = self
                .seed
                .wrapping_add(attempt)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((a * self.group.order() + h) as u64);
            let x = full.mul(&random_sector_tubes(full, h, s), e);
            let scale = max_abs(&x);
            if scale < 1e-12 {
                last = "generic combination annihilated the defect".into();
                continue;
            }
            let hits: Vec<usize> = self
                .dec
                .in_sector(target)
                .into_iter()
                .filter(|&b| max_abs(&full.mul(&self.ici[b], &x)) > 1e-8 * scale)
                .collect();
            if hits.len() != 1 {
                return Err(Error::NoMatchingIci(format!("wall {h} on defect {a} reaches {} defects", hits.len())));
            }
            let b = hits[0];
            let (ua, ub) = (&self.units[a], &self.units[b]);
            if ua.len() != ub.len() {
                return Err(Error::NoMatchingIci(format!("wall {h} joins blocks of different size")));
            }
            let w = full.mul(&full.mul(&ub[0][0], &x), &ua[0][0]);
            let n = full.mul(&full.dag(&w), &w);
            let c = crate::linalg::ratio(&n, &ua[0][0]).map(|c| c.re).unwrap_or(0.0);
            if c <= 1e-12 {
                last = "compression vanished".into();
                continue;
            }
            let w = &w / re(c.sqrt());
            let mut o = zeros(full.dim());
            for i in 0..ua.len() {
                o += full.mul(&full.mul(&ub[i][0], &w), &ua[0][i]);
            }
            return Ok((fix_first_phase(&o, 1e-9), b));
        }
        Err(Error::ZeroProjection(format!("wall {h} on defect {a}: {last}")))
    }

    fn compute_walls(&mut self) -> Result<()> {
        let n = self.len();
        let ng = self.group.order();
        let results = par::map_range(n * ng, |i| self.wall(i / ng, i % ng));
        let mut walls = vec![vec![zeros(0); ng]; n];
        let mut rho = vec![vec![0usize; n]; ng];
        for (i, r) in results.into_iter().enumerate() {
            let (o, b) = r?;
            let (a, h) = (i / ng, i % ng);
            walls[a][h] = o;
            rho[h][a] = b;
        }
        let full = &self.full;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for h in 0..ng {
                let o = &walls[a][h];
                let od = full.dag(o);
                worst = worst.max(max_abs(&(full.mul(&od, o) - &self.ici[a])));
                worst = worst.max(max_abs(&(full.mul(o, &od) - &self.ici[rho[h][a]])));
            }
        }
        self.walls = walls;
        self.rho = rho;
        self.wall_residual = worst;
        Ok(())
    }

    fn compute_eta(&mut self) {
        let n = self.len();
        let ng = self.group.order();
        let full = &self.full;
        let rows = par::map_range(n, |a| {
            let mut worst: f64 = 0.0;
            let table: Vec<Vec<C64>> = (0..ng)
                .map(|h| {
                    (0..ng)
                        .map(|k| {
                            let lhs = full.mul(&self.walls[self.rho[k][a]][h], &self.walls[a][k]);
                            let rhs = &self.walls[a][self.group.mul(h, k)];
                            let eta = crate::linalg::ratio(&lhs, rhs).unwrap_or(re(0.0));
                            worst = worst.max(max_abs(&(lhs - rhs * eta)));
                            eta
                        })
                        .collect()
                })
                .collect();
            (table, worst)
        });
        let mut eta = Vec::with_capacity(n);
        for (table, w) in rows {
            self.wall_residual = self.wall_residual.max(w);
            eta.push(table);
        }
        self.eta = eta;
    }

    /// Rescale every wall `O^h_a ← λ_a(h) O^h_a` by the unit phases
    /// `phases[a][h]` and recompute `η`, which changes by the coboundary
    /// `λ_{ρ_k a}(h) λ_a(k) / λ_a(hk)`. Phases at the identity are ignored so
    /// that `O^1_a = I_a` is kept.
    pub fn regauge(&mut self, phases: &[Vec<C64>]) -> Result<()> {
        let ng = self.group.order();
        if phases.len() != self.len() || phases.iter().any(|r| r.len() != ng) {
            return Err(Error::DimensionMismatch { expected: self.len(), found: phases.len() });
        }
        for (walls, lam) in self.walls.iter_mut().zip(phases) {
            for h in 1..ng {
                walls[h] *= lam[h] / lam[h].norm();
            }
        }
        self.compute_eta();
        Ok(())
    }

    /// Stabilizer `Z_a = {h : ρ_h(a) = a}` (ascending group indices).
    pub fn stabilizer(&self, a: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&h| self.rho[h][a] == a).collect()
    }

    /// Orbits of the permutation action, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for a in 0..self.len() {
            if seen[a] {
                continue;
            }
            let mut orb: Vec<usize> = (0..self.group.order()).map(|h| self.rho[h][a]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &b in &orb {
                seen[b] = true;
            }
            out.push(orb);
        }
        out
    }

    /// For each orbit member `b` of `a`, the first group element `k` with `ρ_k(a) = b`.
    pub fn orbit_transversal(&self, a: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for k in 0..self.group.order() {
            let b = self.rho[k][a];
            if !out.iter().any(|&(x, _)| x == b) {
                out.push((b, k));
            }
        }
        out
    }

    /// Largest residual of the twisted 2-cocycle equation
    /// `η_{ρ_l a}(h,k) η_a(hk,l) = η_a(k,l) η_a(h,kl)` and of the
    /// normalization `η_a(h,1) = η_a(1,h) = 1`.
    pub fn eta_cocycle_residual(&self) -> f64 {
        let g = &self.group;
        let ng = g.order();
        let mut worst: f64 = 0.0;
        for a in 0..self.len() {
            for h in 0..ng {
                worst = worst.max((self.eta[a][h][0] - re(1.0)).norm());
                worst = worst.max((self.eta[a][0][h] - re(1.0)).norm());
                for k in 0..ng {
                    for l in 0..ng {
                        let lhs = self.eta[self.rho[l][a]][h][k] * self.eta[a][g.mul(h, k)][l];
                        let rhs = self.eta[a][k][l] * self.eta[a][h][g.mul(k, l)];
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        worst
    }

    /// Number of violations of `ρ_h ρ_k = ρ_{hk}`, `ρ_h(a) ∈ C_{hgh̄}` and `g ∈ Z_a`.
    pub fn action_violations(&self) -> usize {
        let g = &self.group;
        let mut bad = 0;
        for a in 0..self.len() {
            let sa = self.sector(a);
            if self.rho[sa][a] != a {
                bad += 1;
            }
            for h in 0..g.order() {
                if self.sector(self.rho[h][a]) != g.conj_by(h, sa) {
                    bad += 1;
                }
                for k in 0..g.order() {
                    if self.rho[h][self.rho[k][a]] != self.rho[g.mul(h, k)][a] {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// Commutator pairing `β(h,k) = η_a(h,k)/η_a(k,h)` on `Z_a`, when `Z_a`
    /// is abelian (indexed like [`stabilizer`](Self::stabilizer)).
    pub fn beta(&self, a: usize) -> Option<Vec<Vec<C64>>> {
        let z = self.stabilizer(a);
        if z.iter().any(|&h| z.iter().any(|&k| !self.group.commute(h, k))) {
            return None;
        }
        Some(z.iter().map(|&h| z.iter().map(|&k| self.eta[a][h][k] / self.eta[a][k][h]).collect()).collect())
    }

    /// `dims[g][h]` = number of `h`-invariant `g`-defects (0 unless `gh = hg`).
    pub fn twisted_sector_dims(&self) -> Vec<Vec<usize>> {
        let ng = self.group.order();
        (0..ng)
            .map(|g| {
                (0..ng)
                    .map(|h| {
                        if !self.group.commute(g, h) {
                            return 0;
                        }
                        self.dec.in_sector(g).into_iter().filter(|&a| self.rho[h][a] == a).count()
                    })
                    .collect()
            })
            .collect()
    }

    /// Sum of `d_a²` over each sector.
    pub fn sector_dim_sq(&self) -> Vec<f64> {
        (0..self.group.order())
            .map(|g| self.dec.in_sector(g).into_iter().map(|a| self.qdim(a).powi(2)).sum())
            .collect()
    }

    /// Largest violation of "θ is constant on ρ-orbits".
    pub fn theta_orbit_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.len() {
            for h in 0..self.group.order() {
                let b = self.rho[h][a];
                worst = worst.max((self.dec.blocks[a].twist - self.dec.blocks[b].twist).norm());
            }
        }
        worst
    }

    /// Phase `λ` with `(O^g_a)^n = λ I_a`, `n` the order of the sector `g`
    /// of `a`. Rescaling `O^g_a` by `μ` multiplies it by `μ^n`; for anyons
    /// it is 1.
    pub fn twist_power_phase(&self, a: usize) -> C64 {
        let g = self.sector(a);
        let mut x = self.ici[a].clone();
        let mut cur = 0usize;
        loop {
            x = self.full.mul(&self.walls[a][g], &x);
            cur = self.group.mul(g, cur);
            if cur == 0 {
                break;
            }
        }
        crate::linalg::ratio(&x, &self.ici[a]).unwrap_or(re(0.0))
    }

    /// G-crossed S and T over all invariant pairs.
    pub fn gcrossed(&self) -> GCrossed {
        let full = &self.full;
        let g = &self.group;
        let keys: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|a| (0..g.order()).filter(move |&h| self.rho[h][a] == a).map(move |h| (a, h)))
            .collect();
        let m = keys.len();
        let images = par::map_slice(&keys, |&(a, h)| full.apply_s(&self.walls[a][h]));
        let daggers: Vec<CVec> = keys.iter().map(|&(a, h)| full.dag(&self.walls[a][h])).collect();
        let norms: Vec<C64> = keys
            .iter()
            .zip(&daggers)
            .map(|(&(a, h), od)| full.trace(&full.mul(od, &self.walls[a][h])))
            .collect();
        let rows = par::map_range(m, |i| {
            let (a, h) = keys[i];
            let ga = self.sector(a);
            (0..m)
                .map(|j| {
                    let (b, k) = keys[j];
                    if self.sector(b) != h || k != g.inv(ga) {
                        return re(0.0);
                    }
                    full.trace(&full.mul(&daggers[j], &images[i]))
                })
                .collect::<Vec<_>>()
        });
        let traces = CMat::from_fn(m, m, |i, j| rows[i][j]);
        let s = CMat::from_fn(m, m, |i, j| {
            let ((a, _), (b, _)) = (keys[i], keys[j]);
            if traces[(i, j)] == re(0.0) {
                return re(0.0);
            }
            traces[(i, j)] * self.block_dim(b) as f64 / (self.block_dim(a) as f64 * norms[j])
        });
        let twist = full.twist_element();
        let mut t = CMat::zeros(m, m);
        for (j, &(a, h)) in keys.iter().enumerate() {
            let gh = g.mul(self.sector(a), h);
            if let Some(i) = keys.iter().position(|&k| k == (a, gh)) {
                let image = full.mul(&twist, &self.walls[a][h]);
                t[(i, j)] = crate::linalg::ratio(&image, &self.walls[a][gh]).unwrap_or(re(0.0));
            }
        }
        GCrossed { keys, s, t, traces }
    }

    /// Modular data of the anyons (trivial-sector defects), read off the
    /// `(1,1)` block of the G-crossed S matrix.
    pub fn anyon_modular_data(&self, gx: &GCrossed) -> Result<ModularData> {
        let idx: Vec<usize> = (0..gx.keys.len()).filter(|&i| gx.keys[i].1 == 0 && self.sector(gx.keys[i].0) == 0).collect();
        let s = CMat::from_fn(idx.len(), idx.len(), |i, j| gx.s[(idx[i], idx[j])]);
        let anyons: Vec<usize> = idx.iter().map(|&i| gx.keys[i].0).collect();
        ModularData::from_parts(
            anyons.iter().map(|&a| self.dec.blocks[a].label.clone()).collect(),
            anyons.iter().map(|&a| self.qdim(a)).collect(),
            anyons.iter().map(|&a| self.dec.blocks[a].twist).collect(),
            s,
        )
    }

    /// Largest deviation of the G-crossed S from unitarity within each
    /// admissible `(g,h)` pairing block.
    pub fn gcrossed_unitarity(&self, gx: &GCrossed) -> f64 {
        let ng = self.group.order();
        let mut worst: f64 = 0.0;
        for g in 0..ng {
            for h in 0..ng {
                let rows: Vec<usize> = (0..gx.keys.len())
                    .filter(|&i| self.sector(gx.keys[i].0) == g && gx.keys[i].1 == h)
                    .collect();
                let cols: Vec<usize> = (0..gx.keys.len())
                    .filter(|&j| self.sector(gx.keys[j].0) == h && gx.keys[j].1 == self.group.inv(g))
                    .collect();
                if rows.is_empty() && cols.is_empty() {
                    continue;
                }
                if rows.len() != cols.len() {
                    return f64::INFINITY;
                }
                let blk = CMat::from_fn(rows.len(), cols.len(), |i, j| gx.s[(rows[i], cols[j])]);
                let id = CMat::identity(rows.len(), rows.len());
                worst = worst.max(crate::linalg::max_abs_mat(&(blk.adjoint() * &blk - id)));
            }
        }
        worst
    }
}
