//! Gauging (equivariantization) of a symmetry-enriched theory.
//!
//! For every orbit of defects `[a]` with stabilizer `Z_a` and projective
//! 2-cocycle `η_a`, the `η_a`-projective irreps `μ` of `Z_a` give the gauged
//! anyons `[a,μ]`:
//!
//! * `P_{a,μ} = Σ_{h∈Z_a} p_μ(h) O^h_a`, with `p_μ` the coefficients of the
//!   irreducible central idempotent of the twisted group algebra, i.e.
//!   `p_μ(h) = (d_μ/|Z_a|) χ̄^μ(h)`;
//! * `I_{[a,μ]} = Σ_{k∈G/Z_a} O^k_a P_{a,μ} (O^k_a)†`. Conjugation by the
//!   walls transports the irrep along the orbit (the canonical isomorphism of
//!   projective irreps), so no explicit transport formula is required.
//!
//! The resulting idempotents are irreducible central idempotents of the full
//! tube algebra of the category with its grading forgotten. Their S matrix is
//! evaluated from the G-crossed data: expanding `I_{[a,μ]} = Σ_i c_i O_i` in
//! the domain-wall basis turns the trace formula into the bilinear form
//! `S_{AB} = Σ_{ij} c^A_i c̄^B_j Tr[O_j† S(O_i)] / (D_A D_B)`, which is the
//! orbit/character sum of the G-crossed S matrix. It is cross-checked against
//! the trace formula applied to the gauged idempotents directly.
//!
//! [`SptGauging`] is an independent closed-form pipeline for SPT inputs
//! (`Vec_G^α` graded by `G`), written in the slant-product gauge: it supplies
//! the character-sum fusion rule, checked against Verlinde.

use serde::Serialize;

use crate::algebra::{random_vec, rng, FiniteAlgebra, SparseRow};
use crate::category::{regrade_by_quotient, restrict_to_subgroup, FiniteGroup, FusionCategory, ThreeCocycle};
use crate::defects::DefectTheory;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_mat, ratio, re, zeros, CMat, CVec, C64};
use crate::modular::{match_modular_data, modular_data, ModularData};
use crate::par;
use crate::spectra::{block_dim, block_twist, central_idempotents, decompose, twist_scalar_residual};
use crate::tubes::TubeAlgebra;

/// Tolerance on the 2-cocycle equation for projective irreps.
pub const COCYCLE_TOL: f64 = 1e-8;

/// One projective irrep.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectiveIrrep {
    /// Dimension `d_μ`.
    pub dim: usize,
    /// Character `χ^μ(h) = Tr π^μ(h)`, indexed like the group elements.
    pub characters: Vec<C64>,
    /// Central idempotent of the twisted group algebra, `Σ_h p(h) u_h`.
    #[serde(skip)]
    pub projector: CVec,
}

/// All irreducible `η`-projective representations of a finite group.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectiveIrrepSet {
    /// The group.
    pub group: FiniteGroup,
    /// The 2-cocycle `η(h,k)`.
    #[serde(skip)]
    pub eta: Vec<Vec<C64>>,
    /// Irreps, sorted by dimension and then by descending character real
    /// parts (so the linear trivial representation comes first when present).
    pub irreps: Vec<ProjectiveIrrep>,
}

impl ProjectiveIrrepSet {
    /// Number of irreps.
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    /// Whether there are no irreps.
    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    /// `Σ_μ d_μ²`, which equals `|H|`.
    pub fn dim_sum_sq(&self) -> usize {
        self.irreps.iter().map(|r| r.dim * r.dim).sum()
    }

    /// Largest deviation from `(1/|H|) Σ_h χ^μ(h) χ̄^ν(h) = δ_{μν}` and
    /// `χ^μ(1) = d_μ`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.group.order() as f64;
        let mut worst: f64 = 0.0;
        for (i, a) in self.irreps.iter().enumerate() {
            worst = worst.max((a.characters[0] - re(a.dim as f64)).norm());
            for (j, b) in self.irreps.iter().enumerate() {
                let ip: C64 = a.characters.iter().zip(&b.characters).map(|(x, y)| x * y.conj()).sum::<C64>() / n;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - re(target)).norm());
            }
        }
        worst
    }
}

/// Largest residual of `η(h,k) η(hk,l) = η(k,l) η(h,kl)`, of the
/// normalization `η(1,h) = η(h,1) = 1` and of `|η| = 1`.
pub fn two_cocycle_residual(group: &FiniteGroup, eta: &[Vec<C64>]) -> f64 {
    let n = group.order();
    let mut worst: f64 = 0.0;
    for h in 0..n {
        worst = worst.max((eta[h][0] - re(1.0)).norm()).max((eta[0][h] - re(1.0)).norm());
        for k in 0..n {
            worst = worst.max((eta[h][k].norm() - 1.0).abs());
            for l in 0..n {
                let lhs = eta[h][k] * eta[group.mul(h, k)][l];
                let rhs = eta[k][l] * eta[h][group.mul(k, l)];
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

/// The twisted group algebra `u_h u_k = η(h,k) u_{hk}`, `u_h† = u_h^{-1}`.
pub fn twisted_group_algebra(group: &FiniteGroup, eta: &[Vec<C64>]) -> Result<FiniteAlgebra> {
    let n = group.order();
    if eta.len() != n || eta.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: eta.len() });
    }
    let res = two_cocycle_residual(group, eta);
    if res > COCYCLE_TOL {
        return Err(Error::InvalidCocycle(format!("2-cocycle residual {res:e}")));
    }
    let mut table: Vec<SparseRow> = Vec::with_capacity(n * n);
    for h in 0..n {
        for k in 0..n {
            table.push(vec![(group.mul(h, k), eta[h][k])]);
        }
    }
    let dagger = (0..n).map(|h| vec![(group.inv(h), eta[h][group.inv(h)].conj())]).collect();
    let mut unit = zeros(n);
    unit[0] = re(1.0);
    Ok(FiniteAlgebra::new(n, table, dagger, unit))
}

/// Irreducible `η`-projective representations of `group`, from the central
/// idempotents of the twisted group algebra: `χ̄^μ(h) = (|H|/d_μ) p_μ(h)`.
pub fn projective_irreps(group: &FiniteGroup, eta: &[Vec<C64>], seed: u64) -> Result<ProjectiveIrrepSet> {
    let alg = twisted_group_algebra(group, eta)?;
    let n = group.order();
    let ids = central_idempotents(&alg, seed, 1e-9)?;
    let mut irreps: Vec<ProjectiveIrrep> = ids
        .into_iter()
        .map(|e| {
            let dim = block_dim(&alg, &e);
            let characters = (0..n).map(|h| (e[h] * (n as f64 / dim as f64)).conj()).collect();
            ProjectiveIrrep { dim, characters, projector: e }
        })
        .collect();
    irreps.sort_by(|a, b| {
        a.dim.cmp(&b.dim).then_with(|| {
            for (x, y) in a.characters.iter().zip(&b.characters) {
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
    let set = ProjectiveIrrepSet { group: group.clone(), eta: eta.to_vec(), irreps };
    if set.dim_sum_sq() != n {
        return Err(Error::DegenerateSpectrum(format!("Σ d_μ² = {} ≠ |H| = {n}", set.dim_sum_sq())));
    }
    Ok(set)
}

/// One anyon of the gauged theory.
#[derive(Clone, Debug, Serialize)]
pub struct GaugedAnyon {
    /// Label `[a,μ]`.
    pub label: String,
    /// Orbit representative `a` (defect index).
    pub defect: usize,
    /// Label of the representative defect.
    pub defect_label: String,
    /// Index of the projective irrep `μ` of `Z_a`.
    pub irrep: usize,
    /// Sector of the representative defect.
    pub sector: usize,
    /// `|G|/|Z_a|`.
    pub orbit_size: usize,
    /// `|Z_a|`.
    pub stabilizer_order: usize,
    /// `d_μ`.
    pub irrep_dim: usize,
    /// Block dimension measured in the full tube algebra.
    pub block_dim: usize,
    /// Predicted block dimension `d_μ D_a |G|/|Z_a|`.
    pub expected_block_dim: usize,
    /// Quantum dimension `|G| d_μ d_a / |Z_a|`.
    pub qdim: f64,
    /// Spin measured directly with the Dehn twist.
    pub twist: C64,
    /// Spin predicted by `(χ^μ(g)/χ^μ(1)) θ_a`.
    pub twist_formula: C64,
    /// The gauged idempotent in the full tube algebra.
    #[serde(skip)]
    pub idempotent: CVec,
    /// Expansion coefficients in the domain-wall basis (G-crossed keys).
    #[serde(skip)]
    pub wall_coefficients: CVec,
}

/// Whether the twisted torus state `O^h_a` survives gauging, i.e. the slant
/// product `η_a(k,h)/η_a(h,k)` is trivial on `Z_a ∩ C(h)`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedState {
    /// Defect label.
    pub defect: String,
    /// Group element name.
    pub element: String,
    /// Survival flag.
    pub survives: bool,
}

/// Residuals certifying a gauging computation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GaugeResiduals {
    /// `max ‖I² − I‖, ‖I† − I‖` over gauged idempotents.
    pub idempotent: f64,
    /// `max ‖x I − I x‖` for a random element `x`.
    pub centrality: f64,
    /// `‖Σ I − 1‖`.
    pub completeness: f64,
    /// `Σ D_A²` over gauged blocks.
    pub total_block_dim_sq: usize,
    /// Dimension of the full tube algebra.
    pub algebra_dim: usize,
    /// Number of blocks whose dimension differs from `d_μ D_a |G|/|Z_a|`.
    pub block_dim_mismatches: usize,
    /// Residual of the expansion in the domain-wall basis.
    pub wall_expansion: f64,
    /// `max |S_G-crossed − S_direct|`.
    pub s_direct: f64,
    /// `max |θ_direct − θ_formula|`.
    pub twist_formula: f64,
    /// Largest deviation of `T` from a scalar on a gauged block.
    pub twist_scalar: f64,
    /// `max |d_formula − S_{0A}/S_{00}|`.
    pub qdim_formula: f64,
    /// Worst projective-character orthogonality residual.
    pub irrep_orthogonality: f64,
}

impl GaugeResiduals {
    /// Largest floating-point residual (counts excluded).
    pub fn max(&self) -> f64 {
        [
            self.idempotent,
            self.centrality,
            self.completeness,
            self.wall_expansion,
            self.s_direct,
            self.twist_formula,
            self.twist_scalar,
            self.qdim_formula,
            self.irrep_orthogonality,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Whether every residual is below `tol` and the block counting is exact.
    pub fn passes(&self, tol: f64) -> bool {
        self.max() < tol && self.block_dim_mismatches == 0 && self.total_block_dim_sq == self.algebra_dim
    }
}

/// The gauged anyon theory.
#[derive(Clone, Debug, Serialize)]
pub struct GaugedTheory {
    /// `|G|`.
    pub group_order: usize,
    /// Gauged anyons; the vacuum comes first.
    pub anyons: Vec<GaugedAnyon>,
    /// Projective irreps of each orbit representative's stabilizer, keyed by
    /// the representative's label.
    pub irreps: Vec<(String, ProjectiveIrrepSet)>,
    /// Modular data of the gauged theory.
    pub modular: ModularData,
    /// S evaluated directly by the trace formula on the gauged idempotents.
    #[serde(skip)]
    pub s_direct: CMat,
    /// Certificate residuals.
    pub residuals: GaugeResiduals,
    /// Survival flags of the twisted torus states.
    pub twisted_states: Vec<TwistedState>,
}

impl GaugedTheory {
    /// Fusion multiplicities of the gauged theory (Verlinde on the gauged S).
    pub fn fusion(&self) -> &[Vec<Vec<u32>>] {
        &self.modular.n
    }

    /// Labels in order.
    pub fn labels(&self) -> Vec<String> {
        self.anyons.iter().map(|a| a.label.clone()).collect()
    }
}

/// Gauge the full grading group of a defect theory.
pub fn gauge(theory: &DefectTheory, seed: u64) -> Result<GaugedTheory> {
    let full = theory.full();
    let group = &theory.group;
    let ng = group.order();
    let gx = theory.gcrossed();
    let keys = &gx.keys;
    let walls: Vec<&CVec> = keys.iter().map(|&(a, h)| &theory.walls[a][h]).collect();
    let wall_daggers: Vec<CVec> = walls.iter().map(|o| full.dag(o)).collect();
    let wall_norms: Vec<C64> = walls.iter().zip(&wall_daggers).map(|(o, od)| full.trace(&full.mul(od, o))).collect();

    // Projective irreps of every orbit representative.
    let reps: Vec<usize> = theory.orbits().into_iter().map(|o| o[0]).collect();
    let irrep_sets: Vec<Result<(Vec<usize>, ProjectiveIrrepSet)>> = par::map_slice(&reps, |&a| {
        let (sub, embed) = group.subgroup(&theory.stabilizer(a))?;
        let eta: Vec<Vec<C64>> = embed.iter().map(|&h| embed.iter().map(|&k| theory.eta[a][h][k]).collect()).collect();
        Ok((embed, projective_irreps(&sub, &eta, seed)?))
    });
    let irrep_sets = irrep_sets.into_iter().collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = reps
        .iter()
        .enumerate()
        .flat_map(|(r, _)| (0..irrep_sets[r].1.len()).map(move |mu| (r, mu)))
        .collect();
    let anyons: Vec<Result<GaugedAnyon>> = par::map_slice(&jobs, |&(r, mu)| {
        let a = reps[r];
        let (embed, set) = &irrep_sets[r];
        let irrep = &set.irreps[mu];
        let mut p = zeros(full.dim());
        for (i, &h) in embed.iter().enumerate() {
            p += &theory.walls[a][h] * irrep.projector[i];
        }
        let mut idem = zeros(full.dim());
        for &(_, k) in &theory.orbit_transversal(a) {
            let o = &theory.walls[a][k];
            idem += full.mul(&full.mul(o, &p), &full.dag(o));
        }
        let coeffs = CVec::from_fn(keys.len(), |i, _| full.trace(&full.mul(&wall_daggers[i], &idem)) / wall_norms[i]);
        let orbit_size = ng / embed.len();
        let theta_a = theory.dec.blocks[a].twist;
        let g_local = embed.iter().position(|&h| h == theory.sector(a)).expect("sector lies in the stabilizer");
        let twist_formula = irrep.characters[g_local] / irrep.dim as f64 * theta_a;
        let twist = block_twist(full, &idem)?;
        Ok(GaugedAnyon {
            label: format!("[{},{}]", theory.dec.blocks[a].label, mu),
            defect: a,
            defect_label: theory.dec.blocks[a].label.clone(),
            irrep: mu,
            sector: theory.sector(a),
            orbit_size,
            stabilizer_order: embed.len(),
            irrep_dim: irrep.dim,
            block_dim: block_dim(full.algebra(), &idem),
            expected_block_dim: irrep.dim * theory.block_dim(a) * orbit_size,
            qdim: (ng * irrep.dim) as f64 * theory.qdim(a) / embed.len() as f64,
            twist,
            twist_formula,
            idempotent: idem,
            wall_coefficients: coeffs,
        })
    });
    let mut anyons = anyons.into_iter().collect::<Result<Vec<_>>>()?;
    let vac = full.vacuum_element();
    let v = anyons
        .iter()
        .position(|x| max_abs(&(&x.idempotent - &vac)) < 1e-8)
        .ok_or(Error::VacuumNotFound)?;
    let vac_anyon = anyons.remove(v);
    anyons.insert(0, vac_anyon);

    // Residuals of the idempotent system.
    let mut res = GaugeResiduals { algebra_dim: full.dim(), ..Default::default() };
    let x = random_vec(&mut rng(seed ^ 0x5A5A), full.dim());
    let mut total = zeros(full.dim());
    for an in &anyons {
        let e = &an.idempotent;
        res.idempotent = res.idempotent.max(max_abs(&(full.mul(e, e) - e))).max(max_abs(&(full.dag(e) - e)));
        res.centrality = res.centrality.max(max_abs(&(full.mul(&x, e) - full.mul(e, &x))));
        res.twist_formula = res.twist_formula.max((an.twist - an.twist_formula).norm());
        res.twist_scalar = res.twist_scalar.max(twist_scalar_residual(full, e, an.twist));
        let mut expansion = zeros(full.dim());
        for (c, o) in an.wall_coefficients.iter().zip(&walls) {
            expansion += *o * *c;
        }
        res.wall_expansion = res.wall_expansion.max(max_abs(&(expansion - e)));
        res.total_block_dim_sq += an.block_dim * an.block_dim;
        if an.block_dim != an.expected_block_dim {
            res.block_dim_mismatches += 1;
        }
        total += e;
    }
    res.completeness = max_abs(&(total - full.algebra().unit()));
    res.irrep_orthogonality = irrep_sets.iter().map(|(_, s)| s.orthogonality_residual()).fold(0.0, f64::max);

    // Gauged S from the G-crossed traces, and directly.
    let n = anyons.len();
    let dims: Vec<f64> = anyons.iter().map(|a| a.block_dim as f64).collect();
    let s = CMat::from_fn(n, n, |i, j| {
        let (ci, cj) = (&anyons[i].wall_coefficients, &anyons[j].wall_coefficients);
        let mut acc = re(0.0);
        for p in 0..keys.len() {
            if ci[p].norm() < 1e-14 {
                continue;
            }
            for q in 0..keys.len() {
                if cj[q].norm() < 1e-14 {
                    continue;
                }
                acc += ci[p] * cj[q].conj() * gx.traces[(p, q)];
            }
        }
        acc / (dims[i] * dims[j])
    });
    let images = par::map_slice(&anyons, |a| full.apply_s(&a.idempotent));
    let s_direct = CMat::from_fn(n, n, |i, j| {
        full.trace(&full.mul(&full.dag(&anyons[j].idempotent), &images[i])) / (dims[i] * dims[j])
    });
    res.s_direct = max_abs_mat(&(&s - &s_direct));
    let s00 = s[(0, 0)];
    res.qdim_formula = (0..n).map(|i| (anyons[i].qdim - (s[(0, i)] / s00).re).abs()).fold(0.0, f64::max);

    let modular = ModularData::from_parts(
        anyons.iter().map(|a| a.label.clone()).collect(),
        anyons.iter().map(|a| a.qdim).collect(),
        anyons.iter().map(|a| a.twist).collect(),
        s,
    )?;

    let mut twisted_states = Vec::new();
    for a in 0..theory.len() {
        let z = theory.stabilizer(a);
        for &h in &z {
            let survives = z
                .iter()
                .filter(|&&k| group.commute(h, k))
                .all(|&k| (theory.eta[a][k][h] / theory.eta[a][h][k] - re(1.0)).norm() < 1e-8);
            twisted_states.push(TwistedState {
                defect: theory.dec.blocks[a].label.clone(),
                element: group.name(h).to_string(),
                survives,
            });
        }
    }

    let irreps = reps
        .iter()
        .zip(irrep_sets)
        .map(|(&a, (_, set))| (theory.dec.blocks[a].label.clone(), set))
        .collect();
    Ok(GaugedTheory { group_order: ng, anyons, irreps, modular, s_direct, residuals: res, twisted_states })
}

/// Modular data of the Drinfeld center computed directly from the full tube
/// algebra (the grading is ignored).
pub fn direct_double(cat: &FusionCategory, seed: u64, tol: f64) -> Result<ModularData> {
    let full = TubeAlgebra::build(cat, None);
    let dec = decompose(&full, None, seed, tol)?;
    modular_data(&full, &dec)
}

/// Outcome of a modular-data comparison.
#[derive(Clone, Debug, Serialize)]
pub struct MatchCertificate {
    /// Whether a matching permutation exists.
    pub matched: bool,
    /// `perm[i]` = index in the second theory matched to anyon `i` of the first.
    pub permutation: Option<Vec<usize>>,
    /// Matched label pairs.
    pub pairs: Vec<(String, String)>,
    /// Diagnostic when the match fails.
    pub diagnostic: Option<String>,
}

/// Compare two modular data sets up to relabeling.
pub fn certify_match(a: &ModularData, b: &ModularData, tol: f64) -> MatchCertificate {
    match match_modular_data(a, b, tol) {
        Some(perm) => MatchCertificate {
            matched: true,
            pairs: perm.iter().enumerate().map(|(i, &j)| (a.labels[i].clone(), b.labels[j].clone())).collect(),
            permutation: Some(perm),
            diagnostic: None,
        },
        None => {
            let diagnostic = if a.len() != b.len() {
                format!("rank {} vs {}", a.len(), b.len())
            } else {
                let sig = |m: &ModularData| {
                    let mut v = m.spin_dim_signature();
                    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
                    v
                };
                if sig(a) != sig(b) {
                    "(d, θ) multisets differ".to_string()
                } else {
                    "no permutation preserves S".to_string()
                }
            };
            MatchCertificate { matched: false, permutation: None, pairs: Vec::new(), diagnostic: Some(diagnostic) }
        }
    }
}

/// Certificate of sequential gauging `G ⊳ N`, `Q = G/N`.
#[derive(Clone, Debug, Serialize)]
pub struct SequentialGauging {
    /// Step 1: gauging `N` on the `N`-graded subcategory reproduces the
    /// anyons of the `Q`-enriched intermediate theory.
    pub step_n: MatchCertificate,
    /// Step 2: gauging `Q` on the `Q`-regraded category reproduces the double.
    pub step_q: MatchCertificate,
    /// One-step gauging of all of `G` reproduces the double.
    pub one_step: MatchCertificate,
    /// Number of anyons after each stage: intermediate, final, direct.
    pub ranks: (usize, usize, usize),
}

impl SequentialGauging {
    /// Whether all three comparisons succeeded.
    pub fn passes(&self) -> bool {
        self.step_n.matched && self.step_q.matched && self.one_step.matched
    }
}

/// Gauge a normal subgroup `N` first and the quotient `G/N` second, and
/// compare with gauging `G` at once and with the direct double.
pub fn sequential_gauging(cat: &FusionCategory, normal: &[usize], seed: u64, tol: f64) -> Result<SequentialGauging> {
    let direct = direct_double(cat, seed, tol)?;
    let sub = restrict_to_subgroup(cat, normal)?;
    let gauged_n = gauge(&DefectTheory::build(&sub, seed, tol)?, seed)?;
    let regraded = regrade_by_quotient(cat, normal)?;
    let q_theory = DefectTheory::build(&regraded, seed, tol)?;
    let intermediate = q_theory.anyon_modular_data(&q_theory.gcrossed())?;
    let gauged_q = gauge(&q_theory, seed)?;
    let gauged_g = gauge(&DefectTheory::build(cat, seed, tol)?, seed)?;
    let mtol = 1e-7;
    Ok(SequentialGauging {
        step_n: certify_match(&gauged_n.modular, &intermediate, mtol),
        step_q: certify_match(&gauged_q.modular, &direct, mtol),
        one_step: certify_match(&gauged_g.modular, &direct, mtol),
        ranks: (intermediate.len(), gauged_q.modular.len(), direct.len()),
    })
}

/// Slant product `α^g(h,k) = α(h, ᵏg, k) / (α(ʰᵏg, h, k) α(h, k, g))`,
/// with `ᵏg = k g k̄`.
pub fn slant(alpha: &ThreeCocycle, g: usize, h: usize, k: usize) -> C64 {
    let gr = alpha.group();
    let kg = gr.conj_by(k, g);
    let hkg = gr.conj_by(h, kg);
    alpha.get(h, kg, k) / (alpha.get(hkg, h, k) * alpha.get(h, k, g))
}

/// Closed-form gauging of an SPT `Vec_G^α` in the slant-product gauge
/// `O^h_{ᵏg} O^k_g = α^g(h,k) O^{hk}_g`, with `T(O^h_g) = ᾱ(g,h,g) O^{gh}_g`
/// and `S(O^h_g) = ᾱ^h(g,ḡ) O^ḡ_h` for commuting `g, h`, independent of the
/// numerical tube-algebra pipeline.
///
/// The fusion multiplicities are also computed by the character sum
/// `N = (1/|G|) Σ_{x∈[g], y∈[h], xy∈[k]} Σ_{w∈C(x)∩C(y)} Ū^w(x,y) χ̄_x(w) χ̄_y(w) χ_{xy}(w)`
/// with `U^w(x,y) = α^w(x,y)`. The transported conjugate characters are read
/// off the idempotents: `χ̄_x(w) = (|C(g)|/d_μ) I[(x,w)]`.
#[derive(Clone, Debug, Serialize)]
pub struct SptGauging {
    /// Modular data of the gauged theory, labels `[g,μ]`.
    pub modular: ModularData,
    /// Fusion multiplicities from the character sum.
    pub fusion_character_sum: Vec<Vec<Vec<u32>>>,
    /// Largest distance of a character-sum multiplicity from an integer.
    pub integrality_residual: f64,
    /// Number of entries where character sum and Verlinde disagree.
    pub verlinde_disagreements: usize,
    /// C* residual of the wall algebra (checks the slant-product cocycle).
    pub algebra_residual: f64,
    /// Idempotent residual of the closed-form ICIs.
    pub idempotent_residual: f64,
}

struct SptAnyon {
    class_rep: usize,
    dim: usize,
    idem: CVec,
    stabilizer_order: usize,
    irrep_dim: usize,
}

impl SptGauging {
    /// Run the closed-form pipeline.
    pub fn new(alpha: &ThreeCocycle, seed: u64) -> Result<Self> {
        let gr = alpha.group();
        let n = gr.order();
        let idx = |a: usize, h: usize| a * n + h;
        let dim = n * n;
        let mut table: Vec<SparseRow> = vec![Vec::new(); dim * dim];
        for b in 0..n {
            for h in 0..n {
                for a in 0..n {
                    for k in 0..n {
                        if b == gr.conj_by(k, a) {
                            table[idx(b, h) * dim + idx(a, k)] = vec![(idx(a, gr.mul(h, k)), slant(alpha, a, h, k))];
                        }
                    }
                }
            }
        }
        let dagger = (0..n)
            .flat_map(|a| {
                (0..n).map(move |h| (a, h))
            })
            .map(|(a, h)| vec![(idx(gr.conj_by(h, a), gr.inv(h)), slant(alpha, a, gr.inv(h), h).conj())])
            .collect();
        let unit = CVec::from_fn(dim, |i, _| if i % n == 0 { re(1.0) } else { re(0.0) });
        let alg = FiniteAlgebra::new(dim, table, dagger, unit);
        let algebra_residual = alg.verify_cstar(seed, 8).max_residual();

        // Gauged idempotents.
        let mut anyons: Vec<SptAnyon> = Vec::new();
        let mut labels = Vec::new();
        for g in 0..n {
            if (0..g).any(|x| (0..n).any(|k| gr.conj_by(k, x) == g)) {
                continue;
            }
            let cent: Vec<usize> = (0..n).filter(|&h| gr.commute(g, h)).collect();
            let (sub, embed) = gr.subgroup(&cent)?;
            let eta: Vec<Vec<C64>> = embed.iter().map(|&h| embed.iter().map(|&k| slant(alpha, g, h, k)).collect()).collect();
            let set = projective_irreps(&sub, &eta, seed)?;
            let class: Vec<usize> = {
                let mut c: Vec<usize> = (0..n).map(|k| gr.conj_by(k, g)).collect();
                c.sort_unstable();
                c.dedup();
                c
            };
            for (mu, irrep) in set.irreps.iter().enumerate() {
                let mut p = zeros(dim);
                for (i, &h) in embed.iter().enumerate() {
                    p[idx(g, h)] += irrep.projector[i];
                }
                let mut e = zeros(dim);
                for &b in &class {
                    let k = (0..n).find(|&k| gr.conj_by(k, g) == b).unwrap();
                    let mut o = zeros(dim);
                    o[idx(g, k)] = re(1.0);
                    e += alg.mul(&alg.mul(&o, &p), &alg.dag(&o));
                }
                labels.push(format!("[{},{}]", gr.name(g), mu));
                anyons.push(SptAnyon {
                    class_rep: g,
                    dim: irrep.dim * class.len(),
                    idem: e,
                    stabilizer_order: embed.len(),
                    irrep_dim: irrep.dim,
                });
            }
        }
        let idempotent_residual = anyons
            .iter()
            .map(|a| max_abs(&(alg.mul(&a.idem, &a.idem) - &a.idem)).max(max_abs(&(alg.dag(&a.idem) - &a.idem))))
            .fold(0.0, f64::max);

        // T and S in the wall basis.
        let apply_t = |x: &CVec| {
            let mut y = zeros(dim);
            for a in 0..n {
                for h in 0..n {
                    if x[idx(a, h)] != re(0.0) {
                        y[idx(a, gr.mul(a, h))] += x[idx(a, h)] * alpha.get(a, h, a).conj();
                    }
                }
            }
            y
        };
        let apply_s = |x: &CVec| {
            let mut y = zeros(dim);
            for a in 0..n {
                for h in 0..n {
                    if gr.commute(a, h) && x[idx(a, h)] != re(0.0) {
                        let ab = gr.inv(a);
                        y[idx(h, ab)] += x[idx(a, h)] * slant(alpha, h, a, ab).conj();
                    }
                }
            }
            y
        };
        let k = anyons.len();
        let theta: Vec<C64> = anyons.iter().map(|a| ratio(&apply_t(&a.idem), &a.idem).unwrap_or(re(0.0))).collect();
        let images: Vec<CVec> = anyons.iter().map(|a| apply_s(&a.idem)).collect();
        let s = CMat::from_fn(k, k, |i, j| {
            alg.trace(&alg.mul(&alg.dag(&anyons[j].idem), &images[i])) / (anyons[i].dim * anyons[j].dim) as f64
        });
        let d: Vec<f64> = (0..k)
            .map(|i| (n * anyons[i].irrep_dim) as f64 / anyons[i].stabilizer_order as f64)
            .collect();
                let modular = ModularData::from_parts(labels, d, theta, s)?;

        // Character-sum fusion.
        let chi_bar = |a: &SptAnyon, b: usize, w: usize| a.idem[idx(b, w)] * (a.stabilizer_order as f64 / a.irrep_dim as f64);
        let class_of = |g: usize| -> Vec<usize> {
            let mut c: Vec<usize> = (0..n).map(|k| gr.conj_by(k, g)).collect();
            c.sort_unstable();
            c.dedup();
            c
        };
        let mut fusion = vec![vec![vec![0u32; k]; k]; k];
        let mut integrality: f64 = 0.0;
        for (ia, a) in anyons.iter().enumerate() {
            for (ib, b) in anyons.iter().enumerate() {
                for (ic, c) in anyons.iter().enumerate() {
                    let mut acc = re(0.0);
                    let cls_c = class_of(c.class_rep);
                    for &x in &class_of(a.class_rep) {
                        for &y in &class_of(b.class_rep) {
                            let z = gr.mul(x, y);
                            if !cls_c.contains(&z) {
                                continue;
                            }
                            for w in 0..n {
                                if gr.commute(w, x) && gr.commute(w, y) {
                                    let u = slant(alpha, w, x, y).conj();
                                    acc += u * chi_bar(a, x, w) * chi_bar(b, y, w) * chi_bar(c, z, w).conj();
                                }
                            }
                        }
                    }
                    let v = acc / n as f64;
                    let r = v.re.round();
                    integrality = integrality.max((v - re(r)).norm());
                    fusion[ia][ib][ic] = r.max(0.0) as u32;
                }
            }
        }
        let verlinde_disagreements = (0..k)
            .flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| fusion[a][b][c] != modular.n[a][b][c])
            .count();
        Ok(SptGauging {
            modular,
            fusion_character_sum: fusion,
            integrality_residual: integrality,
            verlinde_disagreements,
            algebra_residual,
            idempotent_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{ising, vec_g_omega, FiniteGroup};
    use crate::linalg::phase;
    use std::f64::consts::PI;

    #[test]
    fn z2_projective_irreps() {
        let g = FiniteGroup::cyclic(2);
        let triv = vec![vec![re(1.0); 2]; 2];
        let set = projective_irreps(&g, &triv, 1).unwrap();
        assert_eq!(set.len(), 2);
        assert!((set.irreps[0].characters[1] - re(1.0)).norm() < 1e-12);
        assert!((set.irreps[1].characters[1] - re(-1.0)).norm() < 1e-12);
        let w = phase(-PI / 4.0);
        let eta = vec![vec![re(1.0), re(1.0)], vec![re(1.0), w]];
        let set = projective_irreps(&g, &eta, 1).unwrap();
        let mut chars: Vec<C64> = set.irreps.iter().map(|r| r.characters[1]).collect();
        chars.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        assert!((chars[0] - phase(-PI / 8.0)).norm() < 1e-12);
        assert!((chars[1] + phase(-PI / 8.0)).norm() < 1e-12);
    }

    #[test]
    fn klein_four_with_nontrivial_class_has_one_two_dimensional_irrep() {
        let g = FiniteGroup::elementary_abelian_2(2);
        // η(h,k) = (−1)^{h_2 k_1} with h = (h_1 h_2) encoded as 2 h_1 + h_2.
        let bit = |x: usize, i: usize| (x >> i) & 1;
        let eta: Vec<Vec<C64>> =
            (0..4).map(|h| (0..4).map(|k| re(if bit(h, 0) * bit(k, 1) == 1 { -1.0 } else { 1.0 })).collect()).collect();
        let set = projective_irreps(&g, &eta, 3).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.irreps[0].dim, 2);
        assert!(set.orthogonality_residual() < 1e-10);
    }

    #[test]
    fn invalid_two_cocycle_is_rejected() {
        let g = FiniteGroup::cyclic(3);
        let mut eta = vec![vec![re(1.0); 3]; 3];
        eta[1][1] = re(-1.0);
        assert!(matches!(projective_irreps(&g, &eta, 1), Err(Error::InvalidCocycle(_))));
    }

    #[test]
    fn gauging_em_toric_code_gives_doubled_ising() {
        let cat = ising(1).unwrap();
        let th = DefectTheory::build(&cat, 7, 1e-8).unwrap();
        let gauged = gauge(&th, 7).unwrap();
        assert_eq!(gauged.anyons.len(), 9);
        assert!(gauged.residuals.passes(1e-8), "{:?}", gauged.residuals);
        let direct = direct_double(&cat, 7, 1e-8).unwrap();
        assert!(certify_match(&gauged.modular, &direct, 1e-7).matched);
    }

    #[test]
    fn gauging_double_semion_spt() {
        let th = DefectTheory::build(&vec_g_omega(&ThreeCocycle::library("Z2", "I").unwrap()).unwrap(), 3, 1e-8).unwrap();
        let gauged = gauge(&th, 3).unwrap();
        assert!(gauged.residuals.passes(1e-8), "{:?}", gauged.residuals);
        let mut spins: Vec<(i64, i64)> =
            gauged.modular.theta.iter().map(|t| ((t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64)).collect();
        spins.sort();
        assert_eq!(spins, vec![(0, -1_000_000), (0, 1_000_000), (1_000_000, 0), (1_000_000, 0)]);
    }

    #[test]
    fn spt_closed_form_fusion_agrees_with_verlinde() {
        for (g, c) in [
            ("Z2", "I"),
            ("Z2", "trivial"),
            ("Z3", "power:2"),
            ("Z4", "power:3"),
            ("S3", "trivial"),
            ("S3", "sign"),
            ("Z2xZ2", "I1*II"),
        ] {
            let alpha = ThreeCocycle::library(g, c).unwrap();
            let spt = SptGauging::new(&alpha, 5).unwrap();
            assert!(spt.algebra_residual < 1e-10, "{g} {c}: {}", spt.algebra_residual);
            assert!(spt.idempotent_residual < 1e-10);
            assert!(spt.modular.checks().max() < 1e-9, "{g} {c}: {:?}", spt.modular.checks());
            assert!(spt.integrality_residual < 1e-9, "{g} {c}: {}", spt.integrality_residual);
            assert_eq!(spt.verlinde_disagreements, 0, "{g} {c}");
            let direct = direct_double(&vec_g_omega(&alpha).unwrap(), 5, 1e-8).unwrap();
            assert!(certify_match(&spt.modular, &direct, 1e-7).matched, "{g} {c}");
        }
    }

    #[test]
    fn sequential_gauging_of_z4_through_z2() {
        for c in ["trivial", "I"] {
            let cat = vec_g_omega(&ThreeCocycle::library("Z4", c).unwrap()).unwrap();
            let cert = sequential_gauging(&cat, &[0, 2], 11, 1e-8).unwrap();
            assert!(cert.passes(), "{c}: {cert:?}");
            assert_eq!(cert.ranks.1, 16);
        }
    }

    #[test]
    fn s3_gauging_reports_twisted_state_survival() {
        let cat = vec_g_omega(&ThreeCocycle::library("S3", "trivial").unwrap()).unwrap();
        let gauged = gauge(&DefectTheory::build(&cat, 2, 1e-8).unwrap(), 2).unwrap();
        assert_eq!(gauged.anyons.len(), 8);
        assert!(gauged.residuals.passes(1e-8), "{:?}", gauged.residuals);
        assert!(gauged.twisted_states.iter().all(|t| t.survives));
        let fusion_total: u32 = gauged.fusion().iter().flatten().flatten().sum();
        assert!(fusion_total > 0);
    }
}
