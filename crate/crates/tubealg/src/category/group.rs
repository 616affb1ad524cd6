//! Finite groups given by explicit multiplication tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on elements `0..n`, with element `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    names: Vec<String>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Build a group from element names and a multiplication table
    /// (`mult[g][h] = gh`). The identity must sit at index 0.
    pub fn new(names: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Malformed("group must have at least one element".into()));
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Malformed("group multiplication table has the wrong shape".into()));
        }
        for g in 0..n {
            if mult[0][g] != g || mult[g][0] != g {
                return Err(Error::Malformed("group element 0 must be the identity".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if mult[mult[g][h]][k] != mult[g][mult[h][k]] {
                        return Err(Error::Malformed(format!(
                            "group multiplication is not associative at ({},{},{})",
                            names[g], names[h], names[k]
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| mult[g][h] == 0) {
                Some(h) if mult[h][g] == 0 => inv[g] = h,
                _ => {
                    return Err(Error::Malformed(format!(
                        "group element {} has no inverse",
                        names[g]
                    )))
                }
            }
        }
        Ok(Self { names, mult, inv })
    }

    /// Cyclic group Z_n with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, mult).expect("cyclic group table is valid")
    }

    /// Direct product Z_2^k with elements named by bit strings, first bit first.
    /// Element index encodes the bits with the first coordinate most significant.
    pub fn elementary_abelian_2(k: usize) -> Self {
        let n = 1usize << k;
        let names = (0..n)
            .map(|i| (0..k).map(|b| if (i >> (k - 1 - b)) & 1 == 1 { '1' } else { '0' }).collect())
            .collect();
        let mult = (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect();
        Self::new(names, mult).expect("elementary abelian table is valid")
    }

    /// Symmetric group S_3 with elements `1, r, r2, s, sr, sr2` where `r` is a
    /// 3-cycle and `s` a transposition.
    pub fn s3() -> Self {
        // Represent as permutations of {0,1,2}; composition (ab)(i) = a(b(i)).
        let r = [1usize, 2, 0];
        let s = [1usize, 0, 2];
        let id = [0usize, 1, 2];
        let comp = |a: [usize; 3], b: [usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        let r2 = comp(r, r);
        let elems = [id, r, r2, s, comp(s, r), comp(s, r2)];
        let names = ["1", "r", "r2", "s", "sr", "sr2"].iter().map(|s| s.to_string()).collect();
        let idx = |p: [usize; 3]| elems.iter().position(|&e| e == p).expect("closed");
        let mult = (0..6)
            .map(|a| (0..6).map(|b| idx(comp(elems[a], elems[b]))).collect())
            .collect();
        Self::new(names, mult).expect("S3 table is valid")
    }

    /// Trivial group.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Look up a built-in group by name: `Z<n>`, `Z2xZ2`, `Z2xZ2xZ2`, `S3`, `1`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "1" | "trivial" => Ok(Self::trivial()),
            "Z2xZ2" | "Z2^2" => Ok(Self::elementary_abelian_2(2)),
            "Z2xZ2xZ2" | "Z2^3" => Ok(Self::elementary_abelian_2(3)),
            "S3" => Ok(Self::s3()),
            _ => {
                if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                    if n >= 1 {
                        return Ok(Self::cyclic(n));
                    }
                }
                Err(Error::Unsupported(format!("unknown group `{name}`")))
            }
        }
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.names.len()
    }

    /// Element names.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of element `g`.
    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    /// Index of the element with the given name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Product `gh`.
    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g][h]
    }

    /// Inverse of `g`.
    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// Conjugate `h g h⁻¹`.
    #[inline]
    pub fn conj_by(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// Multiplication table.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    /// Whether `g` and `h` commute.
    pub fn commute(&self, g: usize, h: usize) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// Whether the element set is a subgroup.
    pub fn is_subgroup(&self, sub: &[usize]) -> bool {
        sub.contains(&0)
            && sub.iter().all(|&a| sub.iter().all(|&b| sub.contains(&self.mul(a, self.inv(b)))))
    }

    /// Whether the element set is a normal subgroup.
    pub fn is_normal(&self, sub: &[usize]) -> bool {
        self.is_subgroup(sub)
            && (0..self.order()).all(|g| sub.iter().all(|&n| sub.contains(&self.conj_by(g, n))))
    }

    /// Quotient by a normal subgroup: returns the quotient group and the
    /// projection map. Cosets are ordered by their smallest element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(Error::NotNormal(format!(
                "{{{}}} is not a normal subgroup",
                normal.iter().map(|&g| self.name(g).to_string()).collect::<Vec<_>>().join(",")
            )));
        }
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] == usize::MAX {
                let id = reps.len();
                reps.push(g);
                for &m in normal {
                    coset_of[self.mul(g, m)] = id;
                }
            }
        }
        let names = reps
            .iter()
            .map(|&g| {
                let mut members: Vec<usize> = normal.iter().map(|&m| self.mul(g, m)).collect();
                members.sort();
                if members.len() == 1 {
                    self.name(members[0]).to_string()
                } else {
                    format!(
                        "{{{}}}",
                        members.iter().map(|&x| self.name(x).to_string()).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        let q = reps.len();
        let mult = (0..q)
            .map(|a| (0..q).map(|b| coset_of[self.mul(reps[a], reps[b])]).collect())
            .collect();
        Ok((FiniteGroup::new(names, mult)?, coset_of))
    }

    /// The subgroup on `elems` as a group in its own right (names kept,
    /// identity first), together with the embedding into `self`.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut embed = elems.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if !self.is_subgroup(&embed) {
            return Err(Error::Malformed("elements do not form a subgroup".into()));
        }
        let local = |g: usize| embed.iter().position(|&x| x == g).expect("closed under products");
        let mult = embed.iter().map(|&a| embed.iter().map(|&b| local(self.mul(a, b))).collect()).collect();
        let names = embed.iter().map(|&g| self.name(g).to_string()).collect();
        Ok((FiniteGroup::new(names, mult)?, embed))
    }

    /// Same group with elements renamed.
    pub fn with_names(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order() {
            return Err(Error::Malformed("group name list has the wrong length".into()));
        }
        Ok(Self { names, mult: self.mult.clone(), inv: self.inv.clone() })
    }

    /// Centralizer-style stabilizer helper: elements satisfying a predicate.
    pub fn filter(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.order()).filter(|&g| pred(g)).collect()
    }
}
