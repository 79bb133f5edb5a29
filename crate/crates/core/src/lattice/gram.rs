use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intmat::{self, Mat};
use crate::error::{Error, Result};

/// Symmetric integer matrix of a lattice in a chosen basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GramMatrix {
    entries: Mat,
}

impl GramMatrix {
    pub fn new(entries: Mat) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Degenerate);
        }
        if let Some((i, j)) = intmat::is_symmetric(&entries) {
            return Err(Error::NotSymmetric(i, j));
        }
        Ok(GramMatrix { entries })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(intmat::from_i64(rows))
    }

    /// Positive definite forms only.
    pub fn positive(entries: Mat) -> Result<Self> {
        let g = Self::new(entries)?;
        if !g.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn determinant(&self) -> BigInt {
        intmat::det(&self.entries)
    }

    /// All leading principal minors positive. Elimination without pivoting
    /// produces exactly those minors as pivots.
    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().is_some()
    }

    /// Leading principal minors Δ₁..Δₙ, or `None` as soon as one is ≤ 0.
    pub fn leading_minors(&self) -> Option<Vec<BigInt>> {
        let n = self.rank();
        let mut m = self.entries.clone();
        let mut prev = BigInt::one();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if !m[k][k].is_positive() {
                return None;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
            out.push(prev.clone());
        }
        Some(out)
    }

    /// `(n₊, n₋, n₀)` by exact symmetric elimination.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut m: Vec<Vec<BigRational>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
            .collect();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut alive: Vec<usize> = (0..n).collect();
        while !alive.is_empty() {
            // Prefer a nonzero diagonal pivot.
            if let Some(&k) = alive.iter().find(|&&k| !m[k][k].is_zero()) {
                let p = m[k][k].clone();
                if p.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                alive.retain(|&x| x != k);
                for &i in &alive {
                    let f = &m[i][k] / &p;
                    for &j in &alive {
                        let t = &f * &m[k][j];
                        m[i][j] -= t;
                    }
                }
                continue;
            }
            // Zero diagonal: find an off-diagonal entry and add row/col j to k.
            let hit = alive
                .iter()
                .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !m[i][j].is_zero());
            match hit {
                Some((k, j)) => {
                    for &i in &alive {
                        let t = m[j][i].clone();
                        m[k][i] += t;
                    }
                    for &i in &alive {
                        let t = m[i][j].clone();
                        m[i][k] += t;
                    }
                }
                None => {
                    zero += alive.len();
                    break;
                }
            }
        }
        (pos, neg, zero)
    }

    pub fn signature(&self) -> i64 {
        let (p, n, _) = self.inertia();
        p as i64 - n as i64
    }

    pub fn is_even(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| intmat::mod2(&r[i]) == 0)
    }

    /// `pᵀ Q p` for an integer change of basis `p` (columns are new basis vectors).
    pub fn transform(&self, p: &Mat) -> Result<Self> {
        Self::new(intmat::congruence(&self.entries, p))
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (a, b) = (self.rank(), other.rank());
        let mut m = intmat::zeros(a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                m[i][j] = self.entries[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                m[a + i][a + j] = other.entries[i][j].clone();
            }
        }
        GramMatrix { entries: m }
    }

    pub fn identity(n: usize) -> GramMatrix {
        GramMatrix { entries: intmat::identity(n) }
    }

    pub fn negated(&self) -> GramMatrix {
        GramMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn adjugate(&self) -> Mat {
        intmat::adjugate(&self.entries)
    }

    /// Entries as machine integers, if they fit.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn inner(&self, u: &[i64], v: &[i64]) -> BigInt {
        let mut s = BigInt::zero();
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    s += &self.entries[i][j] * (ui as i128 * vj as i128);
                }
            }
        }
        s
    }
}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let m = rows
            .iter()
            .map(|r| r.iter().map(|x| x.parse::<BigInt>()).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Mat, _>>()
            .map_err(D::Error::custom)?;
        GramMatrix::new(m).map_err(D::Error::custom)
    }
}

/// Integer change of basis with determinant ±1. Columns are the new basis
/// vectors written in the old basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularMap {
    #[serde(with = "bigmat")]
    matrix: Mat,
}

impl UnimodularMap {
    pub fn new(matrix: Mat) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Degenerate);
        }
        if !intmat::det(&matrix).abs().is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(UnimodularMap { matrix })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap { matrix: intmat::identity(n) }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn compose(&self, then: &UnimodularMap) -> UnimodularMap {
        UnimodularMap { matrix: intmat::mul(&self.matrix, &then.matrix) }
    }

    pub fn apply(&self, q: &GramMatrix) -> GramMatrix {
        GramMatrix { entries: intmat::congruence(q.entries(), &self.matrix) }
    }

    pub fn inverse(&self) -> UnimodularMap {
        UnimodularMap { matrix: intmat::inverse_unimodular(&self.matrix).expect("unimodular") }
    }
}

pub(crate) mod bigmat {
    use super::Mat;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.iter()
            .map(|r| r.iter().map(|x| x.parse::<BigInt>().map_err(D::Error::custom)).collect())
            .collect()
    }
}
