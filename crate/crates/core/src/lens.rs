//! Lens spaces and their Heegaard Floer d-invariants.
//!
//! `LensSpace { p, q, Positive }` is the boundary of the positive definite
//! linear plumbing along the continued fraction `p/q = [a₁, …, a_m]⁻`; it is
//! the double branched cover of the two-bridge knot `S(p, q)` with the
//! orientation convention used throughout this crate. Labels
//! `i ∈ {0, …, p−1}` on spin^c structures are the ones of the recursion
//!
//! ```text
//! d(p, q, i) = (2i + 1 − p − q)² / (4pq) − 1/4 − d(q, p mod q, i mod q)
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Reversed,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Reversed,
            Orientation::Reversed => Orientation::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LensSpace {
    pub p: u64,
    pub q: u64,
    pub orientation: Orientation,
}

impl LensSpace {
    pub fn new(p: u64, q: u64, orientation: Orientation) -> Result<Self> {
        if p < 1 || q < 1 || (p > 1 && q >= p) || p.gcd(&q) != 1 {
            return Err(Error::InvalidFraction { p, q });
        }
        Ok(LensSpace { p, q, orientation })
    }

    pub fn reversed(&self) -> Self {
        LensSpace { orientation: self.orientation.flip(), ..*self }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orientation {
            Orientation::Positive => write!(f, "L({},{})", self.p, self.q),
            Orientation::Reversed => write!(f, "-L({},{})", self.p, self.q),
        }
    }
}

/// d-invariants indexed by spin^c label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTable {
    pub space: LensSpace,
    pub values: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct DTableJson {
    p: u64,
    q: u64,
    orientation: Orientation,
    values: Vec<String>,
}

impl Serialize for DTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DTableJson {
            p: self.space.p,
            q: self.space.q,
            orientation: self.space.orientation,
            values: self.values.iter().map(|v| v.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = DTableJson::deserialize(d)?;
        let space = LensSpace::new(j.p, j.q, j.orientation).map_err(D::Error::custom)?;
        let values = j
            .values
            .iter()
            .map(|v| v.parse::<BigRational>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if values.len() as u64 != j.p {
            return Err(D::Error::custom("table length differs from p"));
        }
        Ok(DTable { space, values })
    }
}

impl DTable {
    pub fn get(&self, i: u64) -> &BigRational {
        &self.values[(i % self.space.p) as usize]
    }
}

fn positive_table(p: u64, q: u64) -> Vec<BigRational> {
    if p == 1 {
        return vec![BigRational::zero()];
    }
    let inner = positive_table(q, p % q);
    let four_pq = BigInt::from(4) * p * q;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    (0..p)
        .map(|i| {
            let t = BigInt::from(2 * i + 1) - BigInt::from(p) - BigInt::from(q);
            BigRational::new(&t * &t, four_pq.clone()) - &quarter - &inner[(i % q) as usize]
        })
        .collect()
}

pub fn d_invariants(y: &LensSpace) -> DTable {
    let mut values = positive_table(y.p, y.q);
    if y.orientation == Orientation::Reversed {
        for v in values.iter_mut() {
            *v = -&*v;
        }
    }
    DTable { space: *y, values }
}

/// Label of the conjugate spin^c structure.
pub fn conjugate(y: &LensSpace, i: u64) -> u64 {
    let p = y.p as i128;
    ((y.q as i128 - 1 - i as i128).rem_euclid(p)) as u64
}

pub fn reverse_orientation(t: &DTable) -> DTable {
    DTable {
        space: t.space.reversed(),
        values: t.values.iter().map(|v| -v).collect(),
    }
}

/// `p/q = [a₁, …, a_m]⁻ = a₁ − 1/(a₂ − 1/(…))` with every `aᵢ ≥ 2`.
pub fn negative_continued_fraction(p: u64, q: u64) -> Result<Vec<u64>> {
    if q == 0 || p <= q || p.gcd(&q) != 1 {
        if p == 1 && q == 1 {
            return Ok(Vec::new());
        }
        return Err(Error::InvalidFraction { p, q });
    }
    let (mut n, mut d) = (p, q);
    let mut out = Vec::new();
    while d != 0 {
        let a = n.div_ceil(d);
        out.push(a);
        let r = a * d - n;
        n = d;
        d = r;
    }
    Ok(out)
}

/// Upper limit on points visited by [`d_invariants_by_plumbing`].
pub const PLUMBING_SEARCH_LIMIT: u128 = 50_000_000;

/// Independent computation of the d-invariants from the negative definite
/// plumbing bounded by the lens space: `d(Y, s) = max (c² + m)/4` over
/// characteristic vectors restricting to `s`. Used as a test oracle.
///
/// A maximizer satisfies `|cᵢ| ≤ aᵢ` coordinatewise; replacing `cᵢ = −aᵢ`
/// by `aᵢ` keeps the maximum, so the search box is
/// `2 − aᵢ ≤ cᵢ ≤ aᵢ`, `cᵢ ≡ aᵢ (mod 2)`.
pub fn d_invariants_by_plumbing(y: &LensSpace) -> Result<DTable> {
    let direct = plumbing_cost(y)?;
    let flipped = plumbing_cost(&y.reversed())?;
    if flipped < direct {
        return Ok(reverse_orientation(&plumbing_search(&y.reversed())?));
    }
    plumbing_search(y)
}

/// Same, without choosing the cheaper orientation.
pub fn d_invariants_by_plumbing_direct(y: &LensSpace) -> Result<DTable> {
    plumbing_search(y)
}

/// Chain of the negative definite plumbing bounded by `y` and the label shift.
fn plumbing_chain(y: &LensSpace) -> Result<(Vec<u64>, i128)> {
    let (p, q) = (y.p, y.q);
    Ok(match y.orientation {
        Orientation::Positive => (negative_continued_fraction(p, p - q)?, q as i128 - 1),
        Orientation::Reversed => (negative_continued_fraction(p, q)?, (p + q) as i128 - 1),
    })
}

fn plumbing_cost(y: &LensSpace) -> Result<u128> {
    if y.p == 1 {
        return Ok(1);
    }
    let (chain, _) = plumbing_chain(y)?;
    Ok(chain.iter().fold(1u128, |acc, &a| acc.saturating_mul(a as u128)))
}

fn plumbing_search(y: &LensSpace) -> Result<DTable> {
    let p = y.p;
    if p == 1 {
        return Ok(DTable { space: *y, values: vec![BigRational::zero()] });
    }
    let (chain, shift) = plumbing_chain(y)?;
    let cost = plumbing_cost(y)?;
    if cost > PLUMBING_SEARCH_LIMIT {
        return Err(Error::SearchExhausted(format!("plumbing box for {y} has {cost} points")));
    }
    let m = chain.len();
    // adj = p·H⁻¹ for the positive definite tridiagonal H (diagonal aᵢ, off-diagonal −1).
    let h: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    BigInt::from(if i == j {
                        chain[i] as i64
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    })
                })
                .collect()
        })
        .collect();
    let det = crate::lattice::intmat::det(&h);
    if det != BigInt::from(p) {
        return Err(Error::InvalidFraction { p, q: y.q });
    }
    let adj: Vec<Vec<i128>> = crate::lattice::intmat::adjugate(&h)
        .iter()
        .map(|r| r.iter().map(|x| i128::try_from(x).map_err(|_| Error::Overflow("plumbing"))).collect())
        .collect::<Result<_>>()?;
    // For G = −H: c·G⁻¹·c = −cᵀ·adj·c / p, and the label uses f = (p·G⁻¹c)₁ = −(adj·c)₁.
    let mut best: Vec<Option<i128>> = vec![None; p as usize];
    let mut c = vec![0i128; m];
    let mut partial = vec![0i128; m]; // Σ_{j<k} adj[k][j]·c_j
    fn rec(
        k: usize,
        chain: &[u64],
        adj: &[Vec<i128>],
        c: &mut [i128],
        partial: &mut [i128],
        acc: i128,
        f: i128,
        p: i128,
        shift: i128,
        best: &mut [Option<i128>],
    ) -> Result<()> {
        let m = chain.len();
        if k == m {
            let twice = f + shift;
            if twice.rem_euclid(2) != 0 {
                return Err(Error::SearchExhausted("odd label parity in plumbing search".into()));
            }
            let i = (twice / 2).rem_euclid(p) as usize;
            if best[i].map_or(true, |b| acc < b) {
                best[i] = Some(acc);
            }
            return Ok(());
        }
        let a = chain[k] as i128;
        let mut ck = 2 - a;
        while ck <= a {
            c[k] = ck;
            let add = adj[k][k] * ck * ck + 2 * ck * partial[k];
            for j in k + 1..m {
                partial[j] += adj[j][k] * ck;
            }
            rec(k + 1, chain, adj, c, partial, acc + add, f - adj[0][k] * ck, p, shift, best)?;
            for j in k + 1..m {
                partial[j] -= adj[j][k] * ck;
            }
            ck += 2;
        }
        Ok(())
    }
    rec(0, &chain, &adj, &mut c, &mut partial, 0, 0, p as i128, shift, &mut best)?;
    let mut values = Vec::with_capacity(p as usize);
    for (i, b) in best.iter().enumerate() {
        let b = b.ok_or_else(|| Error::SearchExhausted(format!("class {i} of {y} not reached")))?;
        // d = (−b/p + m)/4
        values.push(BigRational::new(BigInt::from(m as i128 * p as i128 - b), BigInt::from(4 * p as i128)));
    }
    Ok(DTable { space: *y, values })
}
