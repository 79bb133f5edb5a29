//! Exact enumeration of lattice vectors of bounded norm.
//!
//! Fincke–Pohst with the Cholesky factor replaced by fraction-free
//! elimination rows, so every comparison is an integer comparison. With
//! leading minors Δₖ and `Nₖ` the partial norm (scaled by Δₖ) of the tail
//! coordinates,
//!
//! ```text
//! Nₖ·Δₖ₊₁ = (Δₖ₊₁·vₖ + bₖ)² + Δₖ·Nₖ₊₁,   bₖ = Σ_{j>k} Tₖⱼ vⱼ
//! ```
//!
//! and `Nₖ / Δₖ` is the minimum of the norm over the head coordinates.

use num_integer::Roots;
use num_traits::ToPrimitive;

use super::gram::GramMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: i128,
}

/// Precomputed elimination data for repeated enumeration.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    n: usize,
    /// rows[k][j] for j ≥ k: the elimination row after k steps.
    rows: Vec<Vec<i128>>,
    /// minors[k] = Δₖ, minors[0] = 1.
    minors: Vec<i128>,
    gram: Vec<Vec<i128>>,
}

const OVF: Error = Error::Overflow("short vector enumeration");

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(OVF)
}

impl Ellipsoid {
    pub fn new(q: &GramMatrix) -> Result<Self> {
        if !q.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = q.rank();
        let gram: Vec<Vec<i128>> = q
            .entries()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().ok_or(OVF)).collect())
            .collect::<Result<_>>()?;
        let mut m = gram.clone();
        let mut rows = vec![vec![0i128; n]; n];
        let mut minors = vec![1i128; n + 1];
        for k in 0..n {
            rows[k][k..].copy_from_slice(&m[k][k..]);
            minors[k + 1] = m[k][k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = ck(m[k][k].checked_mul(m[i][j]))?
                        .checked_sub(ck(m[i][k].checked_mul(m[k][j]))?);
                    m[i][j] = ck(v)? / minors[k];
                }
            }
        }
        Ok(Ellipsoid { n, rows, minors, gram })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn norm(&self, v: &[i64]) -> Result<i128> {
        let mut s: i128 = 0;
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            let mut t: i128 = 0;
            for j in 0..self.n {
                t = ck(t.checked_add(ck(self.gram[i][j].checked_mul(v[j] as i128))?))?;
            }
            s = ck(s.checked_add(ck(t.checked_mul(v[i] as i128))?))?;
        }
        Ok(s)
    }

    /// Calls `visit` on every nonzero `v` with `v·v ≤ num/den`, in no
    /// particular order. `visit` returning `false` stops the walk.
    pub fn walk<F>(&self, num: i128, den: i128, mut visit: F) -> Result<()>
    where
        F: FnMut(&[i64], i128) -> bool,
    {
        assert!(den > 0);
        if num < 0 {
            return Ok(());
        }
        let mut v = vec![0i64; self.n];
        let mut tail = vec![0i128; self.n + 1];
        self.level(self.n as isize - 1, num, den, &mut v, &mut tail, &mut visit)?;
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn level<F>(
        &self,
        k: isize,
        num: i128,
        den: i128,
        v: &mut [i64],
        tail: &mut [i128],
        visit: &mut F,
    ) -> Result<bool>
    where
        F: FnMut(&[i64], i128) -> bool,
    {
        if k < 0 {
            let norm = tail[0];
            if v.iter().any(|&x| x != 0) && !visit(v, norm) {
                return Ok(false);
            }
            return Ok(true);
        }
        let k = k as usize;
        let t = self.minors[k + 1];
        let dk = self.minors[k];
        let mut b: i128 = 0;
        for j in k + 1..self.n {
            b = ck(b.checked_add(ck(self.rows[k][j].checked_mul(v[j] as i128))?))?;
        }
        // den·(t·v + b)² ≤ num·Δₖ·t − den·Δₖ·Nₖ₊₁
        let r = ck(ck(num.checked_mul(dk))?.checked_mul(t))?
            .checked_sub(ck(ck(den.checked_mul(dk))?.checked_mul(tail[k + 1]))?);
        let r = ck(r)?;
        if r < 0 {
            return Ok(true);
        }
        let s = (r / den).sqrt();
        let lo = (-s - b).div_euclid(t) + if (-s - b).rem_euclid(t) == 0 { 0 } else { 1 };
        let hi = (s - b).div_euclid(t);
        for x in lo..=hi {
            let xi = i64::try_from(x).map_err(|_| OVF)?;
            v[k] = xi;
            let w = ck(ck(t.checked_mul(x))?.checked_add(b))?;
            let nk = ck(ck(w.checked_mul(w))?.checked_add(ck(dk.checked_mul(tail[k + 1]))?))? / t;
            tail[k] = nk;
            if !self.level(k as isize - 1, num, den, v, tail, visit)? {
                v[k] = 0;
                return Ok(false);
            }
        }
        v[k] = 0;
        Ok(true)
    }
}

/// All nonzero vectors with `v·v ≤ bound`, sorted by norm then
/// lexicographically. Both `v` and `−v` appear.
pub fn short_vectors(q: &GramMatrix, bound: i128) -> Result<Vec<ShortVector>> {
    let e = Ellipsoid::new(q)?;
    let mut out = Vec::new();
    e.walk(bound, 1, |v, norm| {
        out.push(ShortVector { coords: v.to_vec(), norm });
        true
    })?;
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(q: &[Vec<i64>], bound: i128, box_: i64) -> Vec<(Vec<i64>, i128)> {
        let n = q.len();
        let mut out = Vec::new();
        let mut v = vec![-box_; n];
        loop {
            let mut s: i128 = 0;
            for i in 0..n {
                for j in 0..n {
                    s += q[i][j] as i128 * v[i] as i128 * v[j] as i128;
                }
            }
            if s <= bound && v.iter().any(|&x| x != 0) {
                out.push((v.clone(), s));
            }
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] <= box_ {
                    break;
                }
                v[i] = -box_;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    #[test]
    fn matches_brute_force() {
        let q = vec![vec![2, 1, 0], vec![1, 3, -1], vec![0, -1, 4]];
        let g = GramMatrix::from_i64(&q).unwrap();
        for bound in [0, 2, 3, 7, 12] {
            let got: Vec<_> = short_vectors(&g, bound)
                .unwrap()
                .into_iter()
                .map(|s| (s.coords, s.norm))
                .collect();
            assert_eq!(got, brute(&q, bound, 6), "bound {bound}");
        }
    }

    #[test]
    fn e8_roots() {
        // Cartan matrix of E8.
        let mut q = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            q[i][i] = 2;
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
            q[a][b] = -1;
            q[b][a] = -1;
        }
        let g = GramMatrix::from_i64(&q).unwrap();
        assert_eq!(short_vectors(&g, 2).unwrap().len(), 240);
        assert_eq!(short_vectors(&g, 4).unwrap().len(), 240 + 2160);
    }

    #[test]
    fn not_positive() {
        let g = GramMatrix::from_i64(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(short_vectors(&g, 3).unwrap_err(), Error::NotPositiveDefinite);
    }
}
