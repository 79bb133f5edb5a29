//! Linear plumbing lattices, their embeddings into the standard lattice
//! `Zᵐ`, orthogonal complements, and the half-integer rank bound used on
//! the `Kₙ` family.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{canonical_form, intmat, is_isometric, short_vectors, GramMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlumbingSpec {
    pub weights: Vec<u64>,
}

impl PlumbingSpec {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w == 0) {
            return Err(Error::Degenerate);
        }
        Ok(PlumbingSpec { weights })
    }

    /// `[4, 4, …, 4]` of length `2n`.
    pub fn l_n(n: usize) -> Self {
        PlumbingSpec { weights: vec![4; 2 * n] }
    }

    /// `[2, 2, 3, 2, 3, …, 3, 2, 2]` with `j` threes.
    pub fn three_two_chain(j: usize) -> Self {
        assert!(j >= 1);
        let mut w = vec![2, 2, 3];
        for _ in 1..j {
            w.extend([2, 3]);
        }
        w.extend([2, 2]);
        PlumbingSpec { weights: w }
    }

    /// The complementary chain of `l_n(n)`, whose negative bounds the
    /// reverse of the same lens space: `three_two_chain(2n − 1)`.
    pub fn l_n_dual(n: usize) -> Self {
        Self::three_two_chain(2 * n - 1)
    }
}

/// Tridiagonal Gram matrix, off-diagonal entries `+1`.
pub fn plumbing_gram(spec: &PlumbingSpec) -> GramMatrix {
    let m = spec.weights.len();
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        spec.weights[i] as i64
                    } else if i.abs_diff(j) == 1 {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    GramMatrix::from_i64(&rows).expect("tridiagonal is symmetric")
}

/// Images of the basis vectors in `Zᵐ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZnEmbedding {
    pub m: usize,
    pub images: Vec<Vec<i64>>,
}

impl ZnEmbedding {
    /// Canonical representative under signed permutations of coordinates:
    /// every coordinate row gets its first nonzero entry positive, then
    /// rows are sorted.
    pub fn canonical(&self) -> ZnEmbedding {
        let k = self.images.len();
        let mut rows: Vec<Vec<i64>> = (0..self.m).map(|c| (0..k).map(|i| self.images[i][c]).collect()).collect();
        for r in rows.iter_mut() {
            if r.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                for x in r.iter_mut() {
                    *x = -*x;
                }
            }
        }
        rows.sort();
        rows.reverse();
        let images = (0..k).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        ZnEmbedding { m: self.m, images }
    }

    pub fn coordinates_used(&self) -> usize {
        (0..self.m).filter(|&c| self.images.iter().any(|v| v[c] != 0)).count()
    }

    /// No coordinate vanishes on the image, i.e. the embedding does not
    /// factor through a smaller `Zˢ`.
    pub fn is_full(&self) -> bool {
        self.coordinates_used() == self.m
    }

    /// The same embedding into `Zˢ`, `s = coordinates_used()`.
    pub fn restricted(&self) -> ZnEmbedding {
        let keep: Vec<usize> = (0..self.m).filter(|&c| self.images.iter().any(|v| v[c] != 0)).collect();
        let images = self.images.iter().map(|v| keep.iter().map(|&c| v[c]).collect()).collect();
        ZnEmbedding { m: keep.len(), images }.canonical()
    }
}

/// All embeddings of `q` into `Zᵐ` up to signed coordinate permutations.
pub fn embed_in_zn(q: &GramMatrix, m: usize) -> Result<Vec<ZnEmbedding>> {
    let g = q.to_i64().ok_or(Error::Overflow("embedding"))?;
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let k = q.rank();
    let mut found = BTreeSet::new();
    let mut images: Vec<Vec<i64>> = Vec::new();
    embed_rec(&g, m, 0, k, &mut images, &mut found);
    Ok(found.into_iter().collect())
}

fn embed_rec(g: &[Vec<i64>], m: usize, used: usize, k: usize, images: &mut Vec<Vec<i64>>, found: &mut BTreeSet<ZnEmbedding>) {
    let i = images.len();
    if i == k {
        found.insert(ZnEmbedding { m, images: images.clone() }.canonical());
        return;
    }
    let norm = g[i][i];
    let mut v = vec![0i64; m];
    // Entries on already used coordinates, then a sorted positive tail on fresh ones.
    fn on_used(
        g: &[Vec<i64>],
        m: usize,
        used: usize,
        k: usize,
        c: usize,
        left: i64,
        v: &mut Vec<i64>,
        images: &mut Vec<Vec<i64>>,
        found: &mut BTreeSet<ZnEmbedding>,
    ) {
        if c == used {
            fresh(g, m, used, k, used, left, i64::MAX, v, images, found);
            return;
        }
        let mut x = 0i64;
        while x * x <= left {
            for s in if x == 0 { vec![0] } else { vec![x, -x] } {
                v[c] = s;
                on_used(g, m, used, k, c + 1, left - x * x, v, images, found);
            }
            x += 1;
        }
        v[c] = 0;
    }
    #[allow(clippy::too_many_arguments)]
    fn fresh(
        g: &[Vec<i64>],
        m: usize,
        used: usize,
        k: usize,
        c: usize,
        left: i64,
        cap: i64,
        v: &mut Vec<i64>,
        images: &mut Vec<Vec<i64>>,
        found: &mut BTreeSet<ZnEmbedding>,
    ) {
        if left == 0 {
            let i = images.len();
            let ok = (0..i).all(|j| images[j].iter().zip(v.iter()).map(|(a, b)| a * b).sum::<i64>() == g[j][i]);
            if ok {
                images.push(v.clone());
                embed_rec(g, m, c, k, images, found);
                images.pop();
            }
            return;
        }
        if c == m {
            return;
        }
        let mut x = 1i64;
        while x * x <= left && x <= cap {
            v[c] = x;
            fresh(g, m, used, k, c + 1, left - x * x, x, v, images, found);
            x += 1;
        }
        v[c] = 0;
    }
    on_used(g, m, used, k, 0, norm, &mut v, images, found);
}

/// Orthogonal complement of the image, as a Gram matrix in a basis of the
/// (saturated) complement.
pub fn orth_complement(e: &ZnEmbedding) -> Result<GramMatrix> {
    let rows: intmat::Mat = e.images.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let ker = intmat::kernel(&rows, e.m);
    if ker.is_empty() {
        return Err(Error::Degenerate);
    }
    let k = intmat::from_columns(&ker);
    GramMatrix::new(intmat::mul(&intmat::transpose(&k), &k))
}

/// Largest `2r` such that `q` contains orthogonal `x₁..x_r` with `xᵢ² = 2`
/// and `v ↦ (xᵢ·v)` onto `Zʳ`; that is the largest rank of a half-integer
/// sublattice carrying the pairing from `q`.
pub fn max_half_integer_rank(q: &GramMatrix) -> Result<usize> {
    let roots: Vec<Vec<i64>> = short_vectors(q, 2)?
        .into_iter()
        .filter(|s| s.norm == 2)
        .map(|s| s.coords)
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    let cap = q.rank() / 2;
    let mut best = 0;
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(q: &GramMatrix, roots: &[Vec<i64>], start: usize, cap: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if *best == cap {
            return;
        }
        for i in start..roots.len() {
            if chosen.iter().any(|&j| q.inner(&roots[i], &roots[j]) != BigInt::from(0)) {
                continue;
            }
            chosen.push(i);
            let rows: intmat::Mat = chosen
                .iter()
                .map(|&j| {
                    (0..q.rank())
                        .map(|c| (0..q.rank()).map(|a| q.get(a, c) * roots[j][a]).sum())
                        .collect()
                })
                .collect();
            if intmat::rows_primitive(&rows) {
                rec(q, roots, i + 1, cap, chosen, best);
            }
            chosen.pop();
            if *best == cap {
                return;
            }
        }
    }
    rec(q, &roots, 0, cap, &mut chosen, &mut best);
    Ok(2 * best)
}

/// A class of full embeddings of the complementary chain into `Zˢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEmbedding {
    pub coordinates: usize,
    pub images: Vec<Vec<i64>>,
    /// Canonical Gram matrix of the complement in `Zˢ`.
    pub complement: GramMatrix,
    pub complement_is_ln: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DonaldsonCase {
    /// Total rank parameter `p + n` of the candidate four-manifold.
    pub r: usize,
    /// Index into `dual_embeddings`.
    pub embedding: usize,
    /// Unit summands beside the complement: `m − s`.
    pub k: usize,
    pub certified: bool,
    pub max_half_integer_rank: Option<usize>,
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DonaldsonReport {
    pub n: usize,
    pub r: usize,
    pub k_budget: usize,
    pub dual_embeddings: Vec<DualEmbedding>,
    pub cases: Vec<DonaldsonCase>,
    pub obstructed: bool,
    pub notes: Vec<String>,
}

/// Rules out `Kₙ` bounding a slice disk with `p + n ≤ r` via the
/// diagonalization route.
///
/// Gluing a filling `X` of rank `2r'` to the dual plumbing embeds the dual
/// chain in `Zᵐ`, `m = 2r' + rank`. Each such embedding is a full embedding
/// into some `Zˢ` plus `k = m − s` spare coordinates, and `H₂(X)` is then a
/// finite-index sublattice of `C ⊕ Zᵏ` with `C` the complement in `Zˢ`. The
/// case is ruled out when `max_half_integer_rank(C ⊕ Zᵏ) < 2r'`. Cases with
/// `k > k_budget` are reported uncertified.
pub fn donaldson_slicing_obstruction(n: usize, r: usize, k_budget: usize) -> Result<DonaldsonReport> {
    if n == 0 {
        return Err(Error::InvalidQuery("K_n needs n ≥ 1".into()));
    }
    if r < n {
        return Err(Error::InvalidQuery(format!("r = {r} is below n = {n}; the signature bound already applies")));
    }
    let ln = plumbing_gram(&PlumbingSpec::l_n(n));
    let spec = PlumbingSpec::l_n_dual(n);
    let dual = plumbing_gram(&spec);
    let rank = dual.rank();
    // A basis vector of square w touches at most w coordinates.
    let widest = (spec.weights.iter().sum::<u64>() as usize).min(rank + 2 * r);
    let mut classes: BTreeSet<ZnEmbedding> = BTreeSet::new();
    for e in embed_in_zn(&dual, widest)? {
        classes.insert(e.restricted());
    }
    let mut dual_embeddings = Vec::new();
    for e in &classes {
        let complement = if e.m > rank { Some(canonical_form(&orth_complement(e)?)?) } else { None };
        let complement_is_ln = match &complement {
            Some(c) => is_isometric(c, &ln)?,
            None => false,
        };
        dual_embeddings.push(DualEmbedding {
            coordinates: e.m,
            images: e.images.clone(),
            complement: complement.unwrap_or_else(|| GramMatrix::identity(0)),
            complement_is_ln,
        });
    }
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    for rr in n..=r {
        let m = 2 * rr + rank;
        for (idx, d) in dual_embeddings.iter().enumerate() {
            if d.coordinates > m {
                continue;
            }
            let k = m - d.coordinates;
            let (certified, bound) = if k <= k_budget {
                let lat = match (d.complement.rank(), k) {
                    (0, _) => GramMatrix::identity(k),
                    (_, 0) => d.complement.clone(),
                    _ => d.complement.direct_sum(&GramMatrix::identity(k)),
                };
                (true, Some(if lat.rank() == 0 { 0 } else { max_half_integer_rank(&lat)? }))
            } else {
                notes.push(format!("r' = {rr}, embedding {idx}: k = {k} exceeds the budget {k_budget}"));
                (false, None)
            };
            let obstructed = bound.is_some_and(|b| b < 2 * rr);
            cases.push(DonaldsonCase { r: rr, embedding: idx, k, certified, max_half_integer_rank: bound, obstructed });
        }
    }
    let obstructed = cases.iter().all(|c| c.obstructed);
    Ok(DonaldsonReport { n, r, k_budget, dual_embeddings, cases, obstructed, notes })
}
