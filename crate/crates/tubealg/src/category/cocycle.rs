//! Normalised 3-cocycles on finite groups and a small library of representatives.

use std::f64::consts::PI;

use crate::category::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::linalg::{phase, re, C64};

/// Residual allowed in the 3-cocycle equation.
pub const COCYCLE_TOL: f64 = 1e-12;

/// A U(1)-valued 3-cocycle `α(g,h,k)` stored as a dense table.
#[derive(Clone, Debug)]
pub struct ThreeCocycle {
    group: FiniteGroup,
    table: Vec<C64>,
}

impl ThreeCocycle {
    /// Tabulate `f` and check normalisation and the cocycle equation.
    pub fn from_fn(group: &FiniteGroup, f: impl Fn(usize, usize, usize) -> C64) -> Result<Self> {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n * n);
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    table.push(f(g, h, k));
                }
            }
        }
        let c = Self { group: group.clone(), table };
        c.check()?;
        Ok(c)
    }

    /// The trivial cocycle.
    pub fn trivial(group: &FiniteGroup) -> Self {
        Self::from_fn(group, |_, _, _| re(1.0)).expect("trivial cocycle is valid")
    }

    /// Underlying group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Value `α(g,h,k)`.
    #[inline]
    pub fn get(&self, g: usize, h: usize, k: usize) -> C64 {
        let n = self.group.order();
        self.table[(g * n + h) * n + k]
    }

    /// Largest residual of the cocycle equation
    /// `α(h,k,l) α(g,hk,l) α(g,h,k) = α(gh,k,l) α(g,h,kl)`.
    pub fn residual(&self) -> f64 {
        let gr = &self.group;
        let n = gr.order();
        let mut worst: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = self.get(h, k, l) * self.get(g, gr.mul(h, k), l) * self.get(g, h, k);
                        let rhs = self.get(gr.mul(g, h), k, l) * self.get(g, h, gr.mul(k, l));
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        worst
    }

    fn check(&self) -> Result<()> {
        let n = self.group.order();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let v = self.get(g, h, k);
                    if (v.norm() - 1.0).abs() > COCYCLE_TOL {
                        return Err(Error::InvalidCocycle(format!("|α({g},{h},{k})| ≠ 1")));
                    }
                    if (g == 0 || h == 0 || k == 0) && (v - re(1.0)).norm() > COCYCLE_TOL {
                        return Err(Error::InvalidCocycle(format!(
                            "α({g},{h},{k}) must be 1 when an argument is the identity"
                        )));
                    }
                }
            }
        }
        let r = self.residual();
        if r > COCYCLE_TOL {
            return Err(Error::InvalidCocycle(format!("cocycle equation residual {r:e}")));
        }
        Ok(())
    }

    /// Pointwise product of two cocycles on the same group.
    pub fn product(&self, other: &ThreeCocycle) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::InvalidCocycle("cocycles live on different groups".into()));
        }
        Ok(Self { group: self.group.clone(), table: self.table.iter().zip(&other.table).map(|(a, b)| a * b).collect() })
    }

    /// Pull back along a group homomorphism `phi: source → self.group`.
    pub fn pullback(&self, source: &FiniteGroup, phi: &[usize]) -> Result<Self> {
        for g in 0..source.order() {
            for h in 0..source.order() {
                if phi[source.mul(g, h)] != self.group.mul(phi[g], phi[h]) {
                    return Err(Error::InvalidCocycle("pullback map is not a homomorphism".into()));
                }
            }
        }
        Self::from_fn(source, |g, h, k| self.get(phi[g], phi[h], phi[k]))
    }

    /// Whether every value equals 1.
    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|v| (v - re(1.0)).norm() < COCYCLE_TOL)
    }

    /// Look up a library cocycle. Names may be joined by `*` for products.
    ///
    /// * any group: `trivial`
    /// * `Z<n>`: `I` (generator of H³), `power:k` (its k-th power)
    /// * `Z2xZ2`, `Z2xZ2xZ2`: `I1`, `I2`, `I3` (type I on a factor),
    ///   `II` (= `II12`), `II12`, `II13`, `II23` (type II), `III` (type III)
    /// * `S3`: `sign` (type I of Z2 pulled back along the sign map)
    pub fn library(group_name: &str, name: &str) -> Result<Self> {
        let group = FiniteGroup::by_name(group_name)?;
        let mut acc = Self::trivial(&group);
        for part in name.split('*') {
            let c = Self::library_single(group_name, &group, part.trim())?;
            acc = acc.product(&c)?;
        }
        Ok(acc)
    }

    fn library_single(group_name: &str, group: &FiniteGroup, name: &str) -> Result<Self> {
        let unsupported = || Error::Unsupported(format!("cocycle `{name}` on group `{group_name}`"));
        if name == "trivial" || name.is_empty() {
            return Ok(Self::trivial(group));
        }
        match group_name {
            "Z2xZ2" | "Z2^2" | "Z2xZ2xZ2" | "Z2^3" => {
                let k = if group.order() == 4 { 2 } else { 3 };
                let bit = |g: usize, i: usize| ((g >> (k - 1 - i)) & 1) as u32;
                let sign = |e: u32| if e % 2 == 1 { re(-1.0) } else { re(1.0) };
                let parse_idx = |s: &str| -> Option<usize> {
                    let i: usize = s.parse().ok()?;
                    (1..=k).contains(&i).then_some(i - 1)
                };
                if let Some(rest) = name.strip_prefix("III") {
                    if k != 3 || !rest.is_empty() {
                        return Err(unsupported());
                    }
                    return Self::from_fn(group, |a, b, c| sign(bit(a, 0) * bit(b, 1) * bit(c, 2)));
                }
                if let Some(rest) = name.strip_prefix("II") {
                    let (i, j) = match rest {
                        "" => (0, 1),
                        r if r.len() == 2 => {
                            let i = parse_idx(&r[0..1]).ok_or_else(unsupported)?;
                            let j = parse_idx(&r[1..2]).ok_or_else(unsupported)?;
                            if i >= j {
                                return Err(unsupported());
                            }
                            (i, j)
                        }
                        _ => return Err(unsupported()),
                    };
                    return Self::from_fn(group, |a, b, c| sign(bit(a, i) * bit(b, j) * bit(c, j)));
                }
                if let Some(rest) = name.strip_prefix('I') {
                    let i = parse_idx(rest.trim_start_matches('(').trim_end_matches(')')).ok_or_else(unsupported)?;
                    return Self::from_fn(group, |a, b, c| sign(bit(a, i) * bit(b, i) * bit(c, i)));
                }
                Err(unsupported())
            }
            "S3" => {
                if name != "sign" {
                    return Err(unsupported());
                }
                let z2 = FiniteGroup::cyclic(2);
                let base = Self::zn_power(&z2, 1);
                let sign_map = vec![0, 0, 0, 1, 1, 1];
                base.pullback(group, &sign_map)
            }
            _ if group_name.starts_with('Z') => {
                let k: i64 = if name == "I" {
                    1
                } else if let Some(p) = name.strip_prefix("power:") {
                    p.parse().map_err(|_| unsupported())?
                } else {
                    return Err(unsupported());
                };
                Ok(Self::zn_power(group, k))
            }
            _ => Err(unsupported()),
        }
    }

    /// `α(a,b,c) = exp(2πi k a (b + c − [b+c]) / n²)` on the cyclic group `Z_n`.
    pub fn zn_power(group: &FiniteGroup, k: i64) -> Self {
        let n = group.order() as i64;
        Self::from_fn(group, |a, b, c| {
            let (a, b, c) = (a as i64, b as i64, c as i64);
            let carry = b + c - (b + c) % n;
            phase(2.0 * PI * (k * a * carry) as f64 / (n * n) as f64)
        })
        .expect("cyclic cocycles are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_type_one_has_single_nontrivial_value() {
        let a = ThreeCocycle::library("Z2", "I").unwrap();
        for g in 0..2 {
            for h in 0..2 {
                for k in 0..2 {
                    let expect = if g == 1 && h == 1 && k == 1 { -1.0 } else { 1.0 };
                    assert!((a.get(g, h, k) - re(expect)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn omega_two_matches_closed_form() {
        let a = ThreeCocycle::library("Z2xZ2", "II").unwrap();
        // (1,0),(0,1),(0,1) -> -1
        assert!((a.get(2, 1, 1) - re(-1.0)).norm() < 1e-15);
        assert!((a.get(1, 2, 2) - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn every_library_entry_is_a_cocycle() {
        let cases = [
            ("Z2", "I"),
            ("Z3", "I"),
            ("Z4", "power:2"),
            ("Z2xZ2", "I1*II"),
            ("Z2xZ2xZ2", "III"),
            ("Z2xZ2xZ2", "II13"),
            ("S3", "sign"),
        ];
        for (g, n) in cases {
            let c = ThreeCocycle::library(g, n).unwrap();
            assert!(c.residual() < COCYCLE_TOL, "{g} {n}");
        }
        assert!(ThreeCocycle::library("S3", "III").is_err());
    }
}
