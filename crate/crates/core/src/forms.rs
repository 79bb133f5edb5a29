//! Enumeration of positive definite half-integer forms up to isometry.
//!
//! Writing `A = 2X − I`, a form `[[2I, I], [I, X]]` has determinant `det A`,
//! and basis changes of the shape
//!
//! ```text
//! x' = x·S,   y' = y·(I + 2C) − x·C          (S a signed permutation)
//! ```
//!
//! act on `A` by congruence through `S` and through the level-2 congruence
//! subgroup. Together these generate all of GL(r, Z) acting on matrices
//! `A ≡ I (mod 2)`, so every class is reached from a GL-reduced `A'` (small
//! diagonal product) by one coset representative `T` of GL(r, F₂) modulo
//! permutations: `A = T̃ᵀ A' T̃` with `T̃` a lift of `T`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::halfint::{half_integer_gram, lift_gl_mod2};
use crate::lattice::{canonical_form, intmat, GramMatrix};

/// Hermite-type constants bounding `Π aᵢᵢ / det A` for reduced forms, as
/// `(num, den)` for ranks 1 to 4.
const REDUCED_DIAG_BOUND: [(u64, u64); 4] = [(1, 1), (4, 3), (2, 1), (4, 1)];
pub const MAX_RANK: usize = REDUCED_DIAG_BOUND.len();

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormConstraints {
    pub r: usize,
    pub det_target: u64,
    pub n_even: usize,
}

impl FormConstraints {
    pub fn new(r: usize, det_target: u64, n_even: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidConstraints("rank parameter r must be at least 1".into()));
        }
        if r > MAX_RANK {
            return Err(Error::Unsupported(format!("form enumeration supports r ≤ {MAX_RANK}, got {r}")));
        }
        if det_target == 0 || det_target % 2 == 0 {
            return Err(Error::InvalidConstraints(format!("determinant must be odd and positive, got {det_target}")));
        }
        if n_even > r {
            return Err(Error::InvalidConstraints(format!("n_even = {n_even} exceeds r = {r}")));
        }
        Ok(FormConstraints { r, det_target, n_even })
    }

    /// `det ≡ (−1)^{n_even} (mod 4)` must hold for any solution.
    pub fn congruence_compatible(&self) -> bool {
        let want = if self.n_even % 2 == 0 { 1 } else { 3 };
        self.det_target % 4 == want
    }
}

/// Odd `d` with `d·t² = det` for some odd `t`, largest first.
pub fn admissible_determinants(det: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t: u64 = 1;
    while t.saturating_mul(t) <= det {
        if det % (t * t) == 0 {
            out.push(det / (t * t));
        }
        t += 2;
    }
    out
}

/// One representative per isometry class, each in canonical form, sorted.
pub fn enumerate_forms(c: &FormConstraints) -> Result<Vec<GramMatrix>> {
    if !c.congruence_compatible() {
        log::warn!(
            "no forms: det {} is not ≡ (−1)^{} mod 4, so the constraints are inconsistent",
            c.det_target,
            c.n_even
        );
        return Ok(Vec::new());
    }
    let reduced = reduced_candidates(c.r, c.det_target);
    let cosets = coset_lifts(c.r)?;
    let found: Vec<Vec<GramMatrix>> = reduced
        .par_iter()
        .map(|a| -> Result<Vec<GramMatrix>> {
            let mut out = Vec::new();
            for t in &cosets {
                let m = intmat::congruence(a, t);
                if !is_identity_mod2(&m) {
                    continue;
                }
                let evens = (0..c.r).filter(|&i| m[i][i].mod_floor(&BigInt::from(4)) == BigInt::from(3)).count();
                if evens != c.n_even {
                    continue;
                }
                let x: intmat::Mat = m
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, v)| (v + BigInt::from((i == j) as i64)) / 2)
                            .collect()
                    })
                    .collect();
                out.push(canonical_form(&half_integer_gram(&x)?)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let uniq: BTreeSet<GramMatrix> = found.into_iter().flatten().collect();
    Ok(uniq.into_iter().collect())
}

fn is_identity_mod2(m: &intmat::Mat) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| intmat::mod2(v) == (i == j) as u8))
}

/// Positive definite `A` of determinant `det` with sorted diagonal,
/// `|2aᵢⱼ| ≤ aᵢᵢ` and bounded diagonal product. Every GL(r, Z) class has
/// a member here.
pub fn reduced_candidates(r: usize, det: u64) -> Vec<intmat::Mat> {
    let (num, den) = REDUCED_DIAG_BOUND[r - 1];
    let prod_max = det as u128 * num as u128 / den as u128;
    let mut diags = Vec::new();
    fn diag_rec(r: usize, lo: u128, prod: u128, max: u128, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let mut d = lo;
        while prod * d.pow((r - cur.len()) as u32) <= max {
            cur.push(d as u64);
            diag_rec(r, d, prod * d, max, cur, out);
            cur.pop();
            d += 1;
        }
    }
    diag_rec(r, 1, 1, prod_max, &mut Vec::new(), &mut diags);
    let target = BigInt::from(det);
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for d in diags {
        let mut m = intmat::zeros(r, r);
        for i in 0..r {
            m[i][i] = BigInt::from(d[i]);
        }
        fn off_rec(k: usize, pairs: &[(usize, usize)], d: &[u64], m: &mut intmat::Mat, target: &BigInt, out: &mut Vec<intmat::Mat>) {
            if k == pairs.len() {
                if intmat::det(m) == *target
                    && GramMatrix::new(m.clone()).map(|g| g.is_positive_definite()).unwrap_or(false)
                {
                    out.push(m.clone());
                }
                return;
            }
            let (i, j) = pairs[k];
            let lim = (d[i] / 2) as i64;
            for v in -lim..=lim {
                m[i][j] = BigInt::from(v);
                m[j][i] = BigInt::from(v);
                off_rec(k + 1, pairs, d, m, target, out);
            }
        }
        off_rec(0, &pairs, &d, &mut m, &target, &mut out);
    }
    out
}

/// Integer lifts of representatives of GL(r, F₂) modulo column permutations.
fn coset_lifts(r: usize) -> Result<Vec<intmat::Mat>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u32..(1 << (r * r)) {
        let m: Vec<Vec<u8>> = (0..r)
            .map(|i| (0..r).map(|j| ((bits >> (i * r + j)) & 1) as u8).collect())
            .collect();
        if intmat::rank_mod2(&m) != r {
            continue;
        }
        let mut cols: Vec<Vec<u8>> = (0..r).map(|j| (0..r).map(|i| m[i][j]).collect()).collect();
        cols.sort();
        if !seen.insert(cols.clone()) {
            continue;
        }
        let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| cols[j][i] as i64).collect()).collect();
        out.push(lift_gl_mod2(&rows)?.matrix().clone());
    }
    Ok(out)
}

/// `X` block of a half-integer form, for callers that want `A = 2X − I`.
pub fn x_block(q: &GramMatrix) -> Option<intmat::Mat> {
    let n = q.rank();
    if n % 2 == 1 {
        return None;
    }
    let r = n / 2;
    Some((r..n).map(|i| (r..n).map(|j| q.get(i, j).clone()).collect()).collect())
}

/// Count of even diagonal entries of the `X` block.
pub fn even_y_count(q: &GramMatrix) -> usize {
    let r = q.rank() / 2;
    (r..q.rank()).filter(|&i| q.get(i, i).is_even()).count()
}

/// `true` when `det` is a perfect odd square.
pub fn is_odd_square(det: u64) -> bool {
    let s = num_integer::Roots::sqrt(&det);
    s * s == det && s % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[Vec<i64>]) -> GramMatrix {
        GramMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn det15_rank2() {
        let forms = enumerate_forms(&FormConstraints::new(1, 15, 1).unwrap()).unwrap();
        assert_eq!(forms, vec![g(&[vec![2, 1], vec![1, 8]])]);
    }

    #[test]
    fn incompatible_is_empty() {
        let c = FormConstraints::new(1, 15, 0).unwrap();
        assert!(!c.congruence_compatible());
        assert!(enumerate_forms(&c).unwrap().is_empty());
    }

    #[test]
    fn admissible() {
        assert_eq!(admissible_determinants(45), vec![45, 5]);
        assert_eq!(admissible_determinants(15), vec![15]);
        assert_eq!(admissible_determinants(225), vec![225, 25, 9, 1]);
    }

    #[test]
    fn rejects_bad_constraints() {
        assert!(FormConstraints::new(0, 15, 0).is_err());
        assert!(FormConstraints::new(2, 16, 0).is_err());
        assert!(FormConstraints::new(2, 15, 3).is_err());
        assert!(matches!(FormConstraints::new(5, 15, 0), Err(Error::Unsupported(_))));
    }
}
