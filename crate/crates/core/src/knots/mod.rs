//! Two-bridge knots, the `Kₙ` family, and knot table records.

pub mod diagram;
mod table;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use crate::lens::negative_continued_fraction;
use crate::error::{Error, Result};
use crate::lens::{LensSpace, Orientation};
pub use table::{builtin_knot, builtin_knots, ingest_table, ingest_table_str};

/// `S(p, q)`: `p` odd, `0 < q < p`, `gcd(p, q) = 1`. The unknot is `S(1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBridgeKnot {
    pub p: u64,
    pub q: u64,
}

impl TwoBridgeKnot {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 1 && q == 1 {
            return Ok(TwoBridgeKnot { p, q });
        }
        if p % 2 == 0 {
            return Err(Error::Unsupported(format!("S({p},{q}) is a link: p must be odd")));
        }
        if q == 0 || q >= p || p.gcd(&q) != 1 {
            return Err(Error::InvalidFraction { p, q });
        }
        Ok(TwoBridgeKnot { p, q })
    }

    pub fn unknot() -> Self {
        TwoBridgeKnot { p: 1, q: 1 }
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    pub fn continued_fraction(&self) -> Vec<u64> {
        negative_continued_fraction(self.p, self.q).expect("validated on construction")
    }

    pub fn mirror(&self) -> Self {
        if self.is_unknot() {
            return *self;
        }
        TwoBridgeKnot { p: self.p, q: self.p - self.q }
    }

    /// Same knot type, with the smaller of `q` and `q⁻¹ mod p`.
    pub fn normalized(&self) -> Self {
        if self.is_unknot() {
            return *self;
        }
        let inv = mod_inverse(self.q, self.p);
        TwoBridgeKnot { p: self.p, q: self.q.min(inv) }
    }

    /// Knot type equality: `q' ≡ q^{±1} (mod p)`.
    pub fn same_knot(&self, other: &TwoBridgeKnot) -> bool {
        self.normalized() == other.normalized()
    }
}

impl fmt::Display for TwoBridgeKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.p, self.q)
    }
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// Signature from the Goeritz matrix of the alternating diagram. With this
/// convention `σ(S(3, 1)) = −2` and `σ(S(15, 4)) = 2`.
pub fn signature(k: &TwoBridgeKnot) -> i64 {
    if k.is_unknot() {
        return 0;
    }
    diagram::TaitGraph::from_chain(&k.continued_fraction())
        .and_then(|t| t.signature())
        .expect("two-bridge diagrams are knot diagrams")
}

pub fn determinant(k: &TwoBridgeKnot) -> u64 {
    k.p
}

/// Representative with `σ ≥ 0` (mirroring if needed) and normalized `q`;
/// the flag records whether a mirror was taken.
pub fn canonical(k: &TwoBridgeKnot) -> (TwoBridgeKnot, bool) {
    if signature(k) < 0 {
        (k.mirror().normalized(), true)
    } else {
        (k.normalized(), false)
    }
}

pub fn branched_double_cover(k: &TwoBridgeKnot) -> LensSpace {
    LensSpace { p: k.p, q: k.q, orientation: Orientation::Positive }
}

/// Evaluates `[a₁, …, a_m]⁻` as a reduced fraction.
pub fn evaluate_continued_fraction(chain: &[u64]) -> Result<(u64, u64)> {
    let (mut n, mut d): (u128, u128) = (1, 0);
    for &a in chain.iter().rev() {
        // a − d/n
        let nn = (a as u128).checked_mul(n).and_then(|x| x.checked_sub(d)).ok_or(Error::Overflow("continued fraction"))?;
        d = n;
        n = nn;
    }
    let n = u64::try_from(n).map_err(|_| Error::Overflow("continued fraction"))?;
    let d = u64::try_from(d).map_err(|_| Error::Overflow("continued fraction"))?;
    Ok((n, d))
}

/// `Kₙ = S(p, q)` with `p/q = [4, 4, …, 4]⁻` of length `2n`.
pub fn kn_family(n: u32) -> Result<TwoBridgeKnot> {
    if n == 0 {
        return Err(Error::InvalidQuery("K_n needs n ≥ 1".into()));
    }
    let (p, q) = evaluate_continued_fraction(&vec![4; 2 * n as usize])?;
    TwoBridgeKnot::new(p, q)
}

/// A row of a knot table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub determinant: u64,
    pub signature: i64,
    pub two_bridge: Option<TwoBridgeKnot>,
    pub slice_genus: Option<u32>,
}

/// Is `K` slice in `(CP²)° ` with `p` positive and `n` negative generators?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceQuery {
    pub knot: KnotRecord,
    pub p: u32,
    pub n: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kn_values() {
        assert_eq!(kn_family(1).unwrap(), TwoBridgeKnot { p: 15, q: 4 });
        assert_eq!(kn_family(2).unwrap().p, 209);
        assert_eq!(kn_family(3).unwrap().p, 2911);
        for n in 1..=4 {
            assert_eq!(signature(&kn_family(n).unwrap()), 2 * n as i64);
        }
    }

    #[test]
    fn canonical_mirrors() {
        let k = TwoBridgeKnot::new(15, 11).unwrap();
        assert_eq!(signature(&k), -2);
        let (c, mirrored) = canonical(&k);
        assert!(mirrored);
        assert_eq!(c, TwoBridgeKnot { p: 15, q: 4 });
    }

    #[test]
    fn invalid() {
        assert!(TwoBridgeKnot::new(8, 3).is_err());
        assert!(TwoBridgeKnot::new(9, 3).is_err());
        assert!(TwoBridgeKnot::new(9, 9).is_err());
    }

    #[test]
    fn same_knot_inverse() {
        let a = TwoBridgeKnot::new(15, 4).unwrap();
        let b = TwoBridgeKnot::new(15, 4).unwrap();
        assert!(a.same_knot(&b));
        // 4·4 = 16 ≡ 1, so S(15, 4) is its own inverse class; 7·13 = 91 ≡ 1 mod 15.
        assert!(TwoBridgeKnot::new(15, 7).unwrap().same_knot(&TwoBridgeKnot::new(15, 13).unwrap()));
    }
}
