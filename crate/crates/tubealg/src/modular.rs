//! Modular data of the emergent anyon theory: S, T, quantum dimensions,
//! Verlinde fusion, Frobenius–Schur indicators, entanglement entropy
//! corrections, abelian R-symbols and permutation matching of theories.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{max_abs_mat, phase, re, CMat, C64};
use crate::par;
use crate::spectra::BlockDecomposition;
use crate::tubes::TubeAlgebra;

/// Modular data of an anyon theory.
#[derive(Clone, Debug, Serialize)]
pub struct ModularData {
    /// Anyon labels.
    pub labels: Vec<String>,
    /// Quantum dimensions.
    pub d: Vec<f64>,
    /// Topological spins.
    pub theta: Vec<C64>,
    /// Unitary S matrix.
    #[serde(serialize_with = "ser_mat")]
    pub s: CMat,
    /// Verlinde fusion multiplicities `n[a][b][c] = N_{ab}^c`.
    pub n: Vec<Vec<Vec<u32>>>,
    /// Charge conjugation `a ↦ ā`.
    pub dual: Vec<usize>,
    /// Frobenius–Schur indicators (meaningful for self-dual anyons).
    pub kappa: Vec<f64>,
    /// Topological entanglement entropy corrections `γ_a = log D_out − log d_a`.
    pub gamma: Vec<f64>,
    /// Total dimension `D_out = sqrt(Σ d_a²)`.
    pub total_dim: f64,
    /// Largest distance of a Verlinde multiplicity to its rounded value.
    pub verlinde_residual: f64,
}

fn ser_mat<S: serde::Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Residuals of the modular relations.
#[derive(Clone, Debug, Serialize)]
pub struct ModularChecks {
    /// `‖S†S − 1‖`.
    pub unitarity: f64,
    /// `‖(ST)³ − S²‖`.
    pub st_cubed: f64,
    /// `‖S⁴ − 1‖`.
    pub s_fourth: f64,
    /// `‖S² − C‖` with `C` the charge conjugation from the dual map.
    pub charge_conjugation: f64,
    /// `max |S_{0a} − d_a / D_out|`.
    pub vacuum_row: f64,
    /// `max |S − Sᵀ|`.
    pub symmetry: f64,
}

impl ModularChecks {
    /// Largest residual.
    pub fn max(&self) -> f64 {
        [self.unitarity, self.st_cubed, self.s_fourth, self.charge_conjugation, self.vacuum_row, self.symmetry]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `S_{ab} = Tr[I_b† S(I_a)] / (D_a D_b)` with the regular trace.
pub fn s_matrix(full: &TubeAlgebra, dec: &BlockDecomposition) -> CMat {
    let k = dec.len();
    let images = par::map_slice(&dec.blocks, |b| full.apply_s(&b.idempotent));
    let daggers: Vec<_> = dec.blocks.iter().map(|b| full.dag(&b.idempotent)).collect();
    let rows = par::map_range(k, |a| {
        (0..k)
            .map(|b| {
                let tr = full.trace(&full.mul(&daggers[b], &images[a]));
                tr / (dec.blocks[a].dim * dec.blocks[b].dim) as f64
            })
            .collect::<Vec<_>>()
    });
    CMat::from_fn(k, k, |a, b| rows[a][b])
}

/// Diagonal T matrix from the block spins.
pub fn t_matrix(dec: &BlockDecomposition) -> CMat {
    let theta: Vec<C64> = dec.blocks.iter().map(|b| b.twist).collect();
    CMat::from_diagonal(&crate::linalg::CVec::from_vec(theta))
}

/// Verlinde multiplicities `N_{ab}^c = Σ_x S_{ax} S_{bx} conj(S_{cx}) / S_{0x}`
/// and the largest distance to the nearest integer.
pub fn verlinde_fusion(s: &CMat, vacuum: usize) -> (Vec<Vec<Vec<u32>>>, f64) {
    let k = s.nrows();
    let mut worst: f64 = 0.0;
    let n = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    (0..k)
                        .map(|c| {
                            let mut v = re(0.0);
                            for x in 0..k {
                                v += s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(vacuum, x)];
                            }
                            let r = v.re.round();
                            worst = worst.max((v - re(r)).norm());
                            r.max(0.0) as u32
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    (n, worst)
}

/// Frobenius–Schur indicators from modular data (Bantay's formula)
/// `ν_a = Σ_{b,c} N_{bc}^a S_{0b} S_{0c} (θ_b/θ_c)²`.
pub fn fs_indicators(s: &CMat, theta: &[C64], n: &[Vec<Vec<u32>>], vacuum: usize) -> Vec<f64> {
    let k = s.nrows();
    (0..k)
        .map(|a| {
            let mut v = re(0.0);
            for b in 0..k {
                for c in 0..k {
                    if n[b][c][a] > 0 {
                        v += n[b][c][a] as f64 * s[(vacuum, b)] * s[(vacuum, c)] * (theta[b] / theta[c]).powi(2);
                    }
                }
            }
            v.re
        })
        .collect()
}

/// Entanglement entropy corrections `γ_a = log D_out − log d_a`.
pub fn tee(d: &[f64]) -> Vec<f64> {
    let total = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.iter().map(|x| total.ln() - x.ln()).collect()
}

/// Compute the full modular data of a decomposed (unrestricted) tube algebra.
pub fn modular_data(full: &TubeAlgebra, dec: &BlockDecomposition) -> Result<ModularData> {
    dec.vacuum.ok_or(Error::VacuumNotFound)?;
    let s = s_matrix(full, dec);
    ModularData::from_parts(
        dec.blocks.iter().map(|b| b.label.clone()).collect(),
        dec.blocks.iter().map(|b| b.qdim).collect(),
        dec.blocks.iter().map(|b| b.twist).collect(),
        s,
    )
}

impl ModularData {
    /// Assemble modular data from labels, quantum dimensions, spins and a
    /// unitary S matrix whose vacuum is labelled `0` (or comes first):
    /// derives Verlinde fusion, duals, FS indicators and TEE corrections.
    pub fn from_parts(labels: Vec<String>, d: Vec<f64>, theta: Vec<C64>, s: CMat) -> Result<Self> {
        let k = labels.len();
        if s.nrows() != k || s.ncols() != k || d.len() != k || theta.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: s.nrows() });
        }
        let vacuum = labels.iter().position(|l| l == "0").unwrap_or(0);
        let (n, verlinde_residual) = verlinde_fusion(&s, vacuum);
        if verlinde_residual > 1e-6 {
            return Err(Error::NonIntegerFusion(verlinde_residual));
        }
        let s2 = &s * &s;
        let mut dual = vec![usize::MAX; k];
        for a in 0..k {
            let hits: Vec<usize> = (0..k).filter(|&b| (s2[(a, b)] - re(1.0)).norm() < 1e-6).collect();
            if hits.len() != 1 {
                return Err(Error::DualAmbiguous(a));
            }
            dual[a] = hits[0];
        }
        let kappa = fs_indicators(&s, &theta, &n, vacuum);
        let total_dim = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(ModularData { labels, gamma: tee(&d), d, theta, s, n, dual, kappa, total_dim, verlinde_residual })
    }

    /// Number of anyons.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Whether the theory is empty.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Diagonal T matrix.
    pub fn t(&self) -> CMat {
        CMat::from_diagonal(&crate::linalg::CVec::from_vec(self.theta.clone()))
    }

    /// Index of the vacuum (label `0`, or the first entry).
    pub fn vacuum(&self) -> usize {
        self.labels.iter().position(|l| l == "0").unwrap_or(0)
    }

    /// Residuals of the modular relations.
    pub fn checks(&self) -> ModularChecks {
        let k = self.len();
        let id = CMat::identity(k, k);
        let s = &self.s;
        let t = self.t();
        let s2 = s * s;
        let st = s * &t;
        let mut c = CMat::zeros(k, k);
        for a in 0..k {
            c[(a, self.dual[a])] = re(1.0);
        }
        let v = self.vacuum();
        let vacuum_row = (0..k).map(|a| (s[(v, a)] - re(self.d[a] / self.total_dim)).norm()).fold(0.0, f64::max);
        ModularChecks {
            unitarity: max_abs_mat(&(s.adjoint() * s - &id)),
            st_cubed: max_abs_mat(&(&st * &st * &st - &s2)),
            s_fourth: max_abs_mat(&(&s2 * &s2 - &id)),
            charge_conjugation: max_abs_mat(&(&s2 - c)),
            vacuum_row,
            symmetry: max_abs_mat(&(s - s.transpose())),
        }
    }

    /// `N_{ab}^c`.
    pub fn fusion(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[a][b][c]
    }

    /// Fusion outcomes of `a × b`.
    pub fn fuse(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.n[a][b][c] > 0).collect()
    }

    /// Largest violation of `N_{ab}^c = N_{ba}^c` and `N_{ab}^c = N_{b c̄}^{ā}`.
    pub fn fusion_symmetry_violations(&self) -> usize {
        let k = self.len();
        let mut bad = 0;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.n[a][b][c] != self.n[b][a][c] || self.n[a][b][c] != self.n[b][self.dual[c]][self.dual[a]] {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// Multiset of `(d, θ)` pairs, rounded, for quick comparison.
    pub fn spin_dim_signature(&self) -> Vec<(i64, i64, i64)> {
        let mut v: Vec<(i64, i64, i64)> = (0..self.len())
            .map(|a| {
                (
                    (self.d[a] * 1e6).round() as i64,
                    (self.theta[a].re * 1e6).round() as i64,
                    (self.theta[a].im * 1e6).round() as i64,
                )
            })
            .collect();
        v.sort();
        v
    }
}

/// Abelian R-symbol `R^{ab} = Σ_q conj(t_a^{s^a q s^a s^b} · A^{s^b q}_{s^a}) / d_{s^b}`
/// where `s^x` is the unique outer label of the one-dimensional block `x`.
///
/// The bending phase `Ā^{sq}_p` straightens the loop string into a
/// half-braiding; it reduces to the Frobenius–Schur phase `κ̄_s` on the
/// vacuum and is what makes the ribbon identity hold for twisted inputs.
pub fn r_symbol_abelian(full: &TubeAlgebra, dec: &BlockDecomposition, a: usize, b: usize) -> Result<C64> {
    for &x in &[a, b] {
        if dec.blocks[x].dim != 1 {
            return Err(Error::DegenerateBlock(x));
        }
    }
    let outer = |x: usize| -> Result<usize> {
        let mut labels: Vec<usize> = full
            .basis()
            .iter()
            .zip(dec.blocks[x].idempotent.iter())
            .filter(|(_, v)| v.norm() > 1e-9)
            .map(|(t, _)| t.p)
            .collect();
        labels.sort();
        labels.dedup();
        if labels.len() == 1 {
            Ok(labels[0])
        } else {
            Err(Error::DegenerateBlock(x))
        }
    };
    let (sa, sb) = (outer(a)?, outer(b)?);
    let cat = full.category();
    let mut acc = re(0.0);
    for (i, t) in full.basis().iter().enumerate() {
        if t.p == sa && t.r == sa && t.s == sb {
            let bend = phase(cat.bend_a(t.s, t.q, t.p).arg());
            acc += (dec.blocks[a].idempotent[i] * full.norm_dim_sq() * bend).conj();
        }
    }
    Ok(acc / cat.d(sb))
}

/// Largest ribbon-identity residual `|R^{ab} R^{ba} − θ_c/(θ_a θ_b)|` over
/// all pairs of abelian anyons with a single outer label.
pub fn ribbon_residual(full: &TubeAlgebra, dec: &BlockDecomposition, md: &ModularData) -> f64 {
    let k = md.len();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            if (md.d[a] - 1.0).abs() > 1e-9 || (md.d[b] - 1.0).abs() > 1e-9 {
                continue;
            }
            let (Ok(rab), Ok(rba)) = (r_symbol_abelian(full, dec, a, b), r_symbol_abelian(full, dec, b, a)) else { continue };
            let c = md.fuse(a, b);
            if c.len() != 1 {
                continue;
            }
            let want = md.theta[c[0]] / (md.theta[a] * md.theta[b]);
            worst = worst.max((rab * rba - want).norm());
        }
    }
    worst
}

/// Find a bijection `π` with `d_{π(a)} = d_a`, `θ_{π(a)} = θ_a` and
/// `S_{π(a)π(b)} = S_{ab}` within `tol`; vacuum is mapped to vacuum.
pub fn match_modular_data(a: &ModularData, b: &ModularData, tol: f64) -> Option<Vec<usize>> {
    let k = a.len();
    if b.len() != k {
        return None;
    }
    let compatible = |x: usize, y: usize| (a.d[x] - b.d[y]).abs() < tol && (a.theta[x] - b.theta[y]).norm() < tol;
    let cands: Vec<Vec<usize>> = (0..k).map(|x| (0..k).filter(|&y| compatible(x, y)).collect()).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }
    // Assign the most constrained anyons first.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&x| (x != a.vacuum(), cands[x].len()));
    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    fn search(
        depth: usize,
        order: &[usize],
        cands: &[Vec<usize>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        a: &ModularData,
        b: &ModularData,
        tol: f64,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for &y in &cands[x] {
            if used[y] {
                continue;
            }
            let ok = order[..depth].iter().chain(std::iter::once(&x)).all(|&z| {
                let w = if z == x { y } else { perm[z] };
                (a.s[(x, z)] - b.s[(y, w)]).norm() < tol
            });
            if !ok {
                continue;
            }
            perm[x] = y;
            used[y] = true;
            if search(depth + 1, order, cands, perm, used, a, b, tol) {
                return true;
            }
            used[y] = false;
            perm[x] = usize::MAX;
        }
        false
    }
    if a.vacuum() < k && !cands[a.vacuum()].contains(&b.vacuum()) {
        return None;
    }
    cands_vacuum_first(&mut perm, &mut used, a, b);
    let start = usize::from(perm[a.vacuum()] != usize::MAX);
    if search(start, &order, &cands, &mut perm, &mut used, a, b, tol) {
        Some(perm)
    } else {
        None
    }
}

fn cands_vacuum_first(perm: &mut [usize], used: &mut [bool], a: &ModularData, b: &ModularData) {
    let (va, vb) = (a.vacuum(), b.vacuum());
    if (a.s[(va, va)] - b.s[(vb, vb)]).norm() < 1e-6 {
        perm[va] = vb;
        used[vb] = true;
    }
}
