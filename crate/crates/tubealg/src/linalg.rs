//! Dense complex linear algebra helpers shared by the algebra and spectral code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;
/// Dense complex column vector.
pub type CVec = DVector<C64>;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;

/// Shorthand for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real number as a complex scalar.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `e^{iφ}`.
#[inline]
pub fn phase(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

/// Zero vector of length `n`.
pub fn zeros(n: usize) -> CVec {
    CVec::zeros(n)
}

/// Largest absolute entry of a vector (0 for empty vectors).
pub fn max_abs(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of a matrix.
pub fn max_abs_mat(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Index of the entry of largest modulus.
pub fn argmax_abs(v: &CVec) -> usize {
    let mut best = 0;
    let mut val = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > val {
            val = z.norm();
            best = i;
        }
    }
    best
}

/// Index of the first entry whose modulus exceeds `tol` times the largest modulus.
pub fn first_nonzero(v: &CVec, tol: f64) -> Option<usize> {
    let scale = max_abs(v);
    if scale == 0.0 {
        return None;
    }
    v.iter().position(|z| z.norm() > tol * scale)
}

/// Multiply by a phase so that the first nonzero entry is real and positive.
pub fn fix_first_phase(v: &CVec, tol: f64) -> CVec {
    match first_nonzero(v, tol) {
        Some(i) => {
            let z = v[i];
            v * (z.conj() / z.norm())
        }
        None => v.clone(),
    }
}

/// Ratio `x = λ y` fitted on the dominant entry of `y`; `None` when `y` vanishes.
pub fn ratio(x: &CVec, y: &CVec) -> Option<C64> {
    let j = argmax_abs(y);
    if y[j].norm() == 0.0 {
        return None;
    }
    Some(x[j] / y[j])
}

/// Orthonormal basis (columns) of the span of the columns of `a`, by
/// Gram–Schmidt with column pivoting and re-orthogonalisation. A column is
/// accepted while its residual norm exceeds the absolute threshold `tol`.
///
/// Used instead of an SVD: the complex SVD in `nalgebra` can fail to converge
/// on the highly degenerate spectra that algebra idempotents produce.
pub fn column_span(a: &CMat, tol: f64) -> CMat {
    let (n, m) = a.shape();
    let mut resid: Vec<CVec> = (0..m).map(|j| a.column(j).into_owned()).collect();
    let mut basis: Vec<CVec> = Vec::new();
    let mut alive: Vec<bool> = vec![true; m];
    while basis.len() < n {
        let best = (0..m)
            .filter(|&j| alive[j])
            .map(|j| (j, resid[j].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        let Some((j, norm)) = best else { break };
        if norm <= tol {
            break;
        }
        alive[j] = false;
        let mut v = resid[j].clone();
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let nv = v.norm();
        if nv <= tol {
            continue;
        }
        v /= re(nv);
        for (k, r) in resid.iter_mut().enumerate() {
            if alive[k] {
                let c = v.dotc(r);
                *r -= &v * c;
            }
        }
        basis.push(v);
    }
    let mut out = CMat::zeros(n, basis.len());
    for (c, b) in basis.iter().enumerate() {
        out.set_column(c, b);
    }
    out
}

/// Orthonormal basis (columns) of the null space of `a`, using an absolute
/// threshold. An absolute threshold is essential: commutator matrices of
/// commutative algebras are numerically zero and a relative threshold would
/// discard the whole null space.
pub fn null_space(a: &CMat, tol: f64) -> CMat {
    let cols = a.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // The null space is the range of the projector onto the orthogonal
    // complement of the row space; its nonzero singular values are all 1.
    let rows = column_span(&a.adjoint(), tol);
    let proj = CMat::identity(cols, cols) - &rows * rows.adjoint();
    column_span(&proj, 1e-6)
}

/// Numerical rank with an absolute threshold.
pub fn rank(a: &CMat, tol: f64) -> usize {
    column_span(a, tol).ncols()
}

/// Column basis of the range of `a`, orthonormal in the Euclidean metric.
pub fn range_basis(a: &CMat, tol: f64) -> CMat {
    column_span(a, tol)
}

/// Eigen-decomposition of an operator `M` acting on a subspace with positive
/// definite Gram matrix `G`, where `M` is self-adjoint for the inner product
/// defined by `G` (that is `G M = M† G`). Returns real eigenvalues in ascending
/// order together with eigenvectors expressed in the subspace coordinates.
pub fn gram_hermitian_eigen(gram: &CMat, op: &CMat) -> Option<(Vec<f64>, CMat)> {
    let chol = gram.clone().cholesky()?;
    let l = chol.l();
    let l_adj = l.adjoint();
    let l_adj_inv = l_adj.clone().try_inverse()?;
    // A = L† M L^{-†} is Hermitian when G M = M† G.
    let mut a = &l_adj * op * &l_adj_inv;
    let herm = (&a + a.adjoint()) * re(0.5);
    a = herm;
    let eig = nalgebra::SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(op.nrows(), order.len());
    for (c_out, &i) in order.iter().enumerate() {
        let u = eig.eigenvectors.column(i).into_owned();
        vecs.set_column(c_out, &(&l_adj_inv * u));
    }
    Some((vals, vecs))
}

/// Group sorted values into clusters whose consecutive gaps are below `gap`.
pub fn cluster_sorted(vals: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some(cl) if (v - vals[*cl.last().unwrap()]).abs() < gap => cl.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Snap a unit complex number to `e^{2πi p/q}` with `q ≤ max_den`.
/// Returns `(p, q)` with `0 ≤ p < q` when the residual is below `tol`.
pub fn snap_phase(z: C64, max_den: u32, tol: f64) -> Option<(u32, u32)> {
    if (z.norm() - 1.0).abs() > tol.max(1e-9) * 10.0 {
        return None;
    }
    let mut t = z.arg() / (2.0 * std::f64::consts::PI);
    if t < 0.0 {
        t += 1.0;
    }
    for q in 1..=max_den {
        let p = (t * q as f64).round();
        if ((t * q as f64) - p).abs() < tol * q as f64 {
            let p = (p as i64).rem_euclid(q as i64) as u32;
            return Some((p, q));
        }
    }
    None
}

/// Snap a real number to a nearby "nice" value (integer or ±√k/m) for display.
pub fn pretty_real(x: f64, tol: f64) -> String {
    if x.abs() < tol {
        return "0".to_string();
    }
    let r = x.round();
    if (x - r).abs() < tol {
        return format!("{}", r as i64);
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let ax = x.abs();
    for m in 1..=8u32 {
        let sq = ax * m as f64;
        let k = (sq * sq).round();
        if k > 0.0 && (sq * sq - k).abs() < tol * 10.0 {
            let kk = k as u64;
            let root = (kk as f64).sqrt().round() as u64;
            if root * root == kk {
                return format!("{sign}{}/{}", root, m);
            }
            return if m == 1 {
                format!("{sign}√{kk}")
            } else {
                format!("{sign}√{kk}/{m}")
            };
        }
    }
    for q in 2..=16u32 {
        let p = (x * q as f64).round();
        if (x * q as f64 - p).abs() < tol * q as f64 {
            return format!("{}/{}", p as i64, q);
        }
    }
    format!("{x:.6}")
}

/// Human-readable rendering of a complex number, snapping phases when possible.
pub fn pretty_complex(z: C64, max_den: u32, tol: f64) -> String {
    let r = z.norm();
    if r < tol {
        return "0".to_string();
    }
    if z.im.abs() < tol {
        return pretty_real(z.re, tol);
    }
    if z.re.abs() < tol {
        let m = pretty_real(z.im.abs(), tol);
        let s = if z.im < 0.0 { "-" } else { "" };
        return if m == "1" {
            format!("{s}i")
        } else if m.contains('/') {
            format!("{s}i·{m}")
        } else {
            format!("{s}{m}i")
        };
    }
    if let Some((p, q)) = snap_phase(z / r, max_den, tol) {
        let mag = pretty_real(r, tol);
        let (num, den) = reduce(2 * p as i64, q as i64);
        let num = if num > den { num - 2 * den } else { num };
        let ph = match (num, den) {
            (1, 1) => "e^{iπ}".to_string(),
            (n, 1) => format!("e^{{{n}iπ}}"),
            (1, d) => format!("e^{{iπ/{d}}}"),
            (-1, d) => format!("e^{{-iπ/{d}}}"),
            (n, d) => format!("e^{{{n}iπ/{d}}}"),
        };
        return if mag == "1" { ph } else { format!("{mag}·{ph}") };
    }
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn reduce(a: i64, b: i64) -> (i64, i64) {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(a, b).max(1);
    (a / g, b / g)
}
