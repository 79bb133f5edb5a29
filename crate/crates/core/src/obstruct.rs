//! The d-invariant obstruction: a definite form `Q` bounded by `Y` must carry
//! a bijection `φ` from characteristic classes of `Q` to spin^c structures of
//! `Y` (affine over `H²`) with
//!
//! ```text
//! min_{c ∈ class} c·Q⁻¹·c − rank Q ≥ 4·d(Y, φ(class)),   difference ∈ 2Z.
//! ```

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{admissible_determinants, enumerate_forms, FormConstraints};
use crate::knots::{self, SliceQuery, TwoBridgeKnot};
use crate::lattice::{intmat, Ellipsoid, GramMatrix};
use crate::lens::{conjugate, d_invariants, DTable, LensSpace};

/// A characteristic class `c + 2Q·Zʳ` with its shortest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClassData {
    /// `adj(Q)·c mod 2·det`, identifying the class.
    pub key: Vec<i128>,
    pub representative: Vec<i64>,
    pub min_square: BigRational,
    /// `c·Q⁻¹·c mod 8`, constant on the class.
    pub square_mod8: BigRational,
}

const OVF: Error = Error::Overflow("characteristic classes");

fn class_key(adj: &[Vec<i128>], c: &[i64], modulus: i128) -> Result<Vec<i128>> {
    adj.iter()
        .map(|row| {
            let mut s: i128 = 0;
            for (a, &x) in row.iter().zip(c) {
                s = s.checked_add(a.checked_mul(x as i128).ok_or(OVF)?).ok_or(OVF)?;
            }
            Ok(s.rem_euclid(modulus))
        })
        .collect()
}

fn adj_i128(q: &GramMatrix) -> Result<(Vec<Vec<i128>>, i128)> {
    let det = q.determinant().to_i128().ok_or(OVF)?;
    let adj = q
        .adjugate()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().ok_or(OVF)).collect())
        .collect::<Result<Vec<Vec<i128>>>>()?;
    Ok((adj, det))
}

/// All `|det Q|` characteristic classes, sorted by key.
pub fn characteristic_classes(q: &GramMatrix) -> Result<Vec<CharClassData>> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = q.rank();
    let (adj, det) = adj_i128(q)?;
    let adj_gram = GramMatrix::new(intmat::from_i64(
        &adj.iter()
            .map(|r| r.iter().map(|&x| i64::try_from(x).map_err(|_| OVF)).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?,
    ))?;
    let ell = Ellipsoid::new(&adj_gram)?;
    let parity: Vec<i64> = (0..n).map(|i| intmat::mod2(q.get(i, i)) as i64).collect();
    let modulus = 2 * det;
    let total = det as usize;
    // c·Q⁻¹·c = cᵀ·adj·c / det; start at bound rank and double.
    let mut bound = n as i128 * det;
    loop {
        let mut best: HashMap<Vec<i128>, (i128, Vec<i64>)> = HashMap::new();
        let mut err = None;
        let mut consider = |v: &[i64], norm: i128| {
            if v.iter().zip(&parity).any(|(x, p)| (x - p).rem_euclid(2) != 0) {
                return;
            }
            match class_key(&adj, v, modulus) {
                Ok(k) => {
                    let e = best.entry(k).or_insert((norm, v.to_vec()));
                    if norm < e.0 || (norm == e.0 && v < e.1.as_slice()) {
                        *e = (norm, v.to_vec());
                    }
                }
                Err(e) => err = Some(e),
            }
        };
        if parity.iter().all(|&p| p == 0) {
            consider(&vec![0; n], 0);
        }
        ell.walk(bound, 1, |v, norm| {
            consider(v, norm);
            true
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if best.len() == total {
            let mut out: Vec<CharClassData> = best
                .into_iter()
                .map(|(key, (norm, rep))| {
                    let sq = BigRational::new(BigInt::from(norm), BigInt::from(det));
                    let eight = BigRational::from(BigInt::from(8));
                    let m8 = &sq - (&sq / &eight).floor() * &eight;
                    CharClassData { key, representative: rep, min_square: sq, square_mod8: m8 }
                })
                .collect();
            out.sort_by(|a, b| a.key.cmp(&b.key));
            return Ok(out);
        }
        bound = bound.checked_mul(2).ok_or(OVF)?;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Also require `φ` to intertwine conjugation.
    pub require_conjugation_symmetry: bool,
    /// Allow `|det Q| = |H₁(Y)| / t²`, matching onto the order-`|det Q|` coset.
    pub allow_square_quotient: bool,
}

/// `φ(k) = offset + step·k (mod p)` where class `k` is `c₀ + 2k·g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub offset: u64,
    pub step: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    Inequality,
    Parity,
    Conjugation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub matching: Matching,
    pub class_index: u64,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormVerdict {
    pub space: LensSpace,
    pub obstructed: bool,
    pub cyclic: bool,
    pub matchings_tried: u64,
    pub witness: Option<Matching>,
    /// First failing class for every matching tried.
    pub refutations: Vec<Refutation>,
}

fn is_square(x: u64) -> Option<u64> {
    let s = num_integer::Roots::sqrt(&x);
    (s * s == x).then_some(s)
}

/// Checks one form against one d-table.
pub fn check_form(q: &GramMatrix, dt: &DTable, opts: &CheckOptions) -> Result<FormVerdict> {
    let p = dt.space.p;
    let det = q.determinant();
    let dq = det.to_u64().filter(|&d| d > 0).ok_or(Error::NotPositiveDefinite)?;
    let scale = if dq == p {
        1
    } else if opts.allow_square_quotient && p % dq == 0 && is_square(p / dq).is_some() {
        p / dq
    } else {
        return Err(Error::DeterminantMismatch { form: det, space: p });
    };
    let classes = characteristic_classes(q)?;
    let r = q.rank();
    let (inv, u, _) = intmat::smith(q.entries());
    let cyclic = inv[..r - 1].iter().all(|x| x.is_one());
    if !cyclic {
        return Ok(FormVerdict {
            space: dt.space,
            obstructed: true,
            cyclic: false,
            matchings_tried: 0,
            witness: None,
            refutations: Vec::new(),
        });
    }
    let (adj, d) = adj_i128(q)?;
    let modulus = 2 * d;
    let u_inv = intmat::inverse_unimodular(&u).ok_or(Error::NotUnimodular)?;
    let g: Vec<i64> = intmat::column(&u_inv, r - 1)
        .iter()
        .map(|x| x.to_i64().ok_or(OVF))
        .collect::<Result<_>>()?;
    let index: HashMap<&[i128], usize> = classes.iter().enumerate().map(|(i, c)| (c.key.as_slice(), i)).collect();
    let c0 = &classes[0].representative;
    let dq_us = dq as usize;
    let mut seq = Vec::with_capacity(dq_us);
    let mut pos_of_class = vec![usize::MAX; dq_us];
    for k in 0..dq_us {
        let c: Vec<i64> = c0.iter().zip(&g).map(|(a, b)| a + 2 * k as i64 * b).collect();
        let key = class_key(&adj, &c, modulus)?;
        let idx = *index.get(key.as_slice()).ok_or_else(|| Error::SearchExhausted("class walk left the table".into()))?;
        if pos_of_class[idx] != usize::MAX {
            return Err(Error::SearchExhausted("generator does not have full order".into()));
        }
        pos_of_class[idx] = k;
        seq.push(idx);
    }
    // Position of the conjugate class −c.
    let conj_pos: Vec<usize> = seq
        .iter()
        .map(|&idx| {
            let neg: Vec<i64> = classes[idx].representative.iter().map(|x| -x).collect();
            let key = class_key(&adj, &neg, modulus)?;
            Ok(pos_of_class[index[key.as_slice()]])
        })
        .collect::<Result<_>>()?;
    let rank = BigRational::from(BigInt::from(r));
    let vals: Vec<BigRational> = seq.iter().map(|&i| &classes[i].min_square - &rank).collect();
    let four = BigRational::from(BigInt::from(4));
    let fourd: Vec<BigRational> = dt.values.iter().map(|v| v * &four).collect();
    // Precompute the pointwise test for every (class position, label) pair.
    let table: Vec<Vec<Option<FailureReason>>> = vals
        .par_iter()
        .map(|v| {
            fourd
                .iter()
                .map(|f| {
                    let diff = v - f;
                    if diff.is_negative() {
                        Some(FailureReason::Inequality)
                    } else if !diff.is_integer() || diff.to_integer().is_odd() {
                        Some(FailureReason::Parity)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let units: Vec<u64> = (1..dq.max(2)).filter(|&x| x.gcd(&dq) == 1).collect();
    let units = if dq == 1 { vec![0] } else { units };
    let mut tried = 0u64;
    let mut witness = None;
    let mut refutations = Vec::new();
    for offset in 0..p {
        for &unit in &units {
            let step = (scale as u128 * unit as u128 % p as u128) as u64;
            let m = Matching { offset, step };
            tried += 1;
            let phi = |k: usize| ((offset as u128 + step as u128 * k as u128) % p as u128) as usize;
            let mut fail = None;
            for k in 0..dq_us {
                let i = phi(k);
                if let Some(reason) = table[k][i] {
                    fail = Some((k, reason));
                    break;
                }
                if opts.require_conjugation_symmetry
                    && phi(conj_pos[k]) as u64 != conjugate(&dt.space, i as u64)
                {
                    fail = Some((k, FailureReason::Conjugation));
                    break;
                }
            }
            match fail {
                None => {
                    if witness.is_none() {
                        witness = Some(m);
                    }
                }
                Some((k, reason)) => refutations.push(Refutation { matching: m, class_index: k as u64, reason }),
            }
        }
    }
    Ok(FormVerdict {
        space: dt.space,
        obstructed: witness.is_none(),
        cyclic: true,
        matchings_tried: tried,
        witness,
        refutations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    Obstructed,
    NotObstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormReport {
    pub gram: GramMatrix,
    pub determinant: u64,
    pub obstructed: bool,
    pub verdicts: Vec<FormVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub knot: String,
    pub two_bridge: TwoBridgeKnot,
    pub mirrored: bool,
    pub signature: i64,
    pub p: u32,
    pub n: u32,
    pub determinants_tried: Vec<u64>,
    pub determinants_skipped: Vec<u64>,
    pub forms: Vec<FormReport>,
    pub conclusion: Conclusion,
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

/// Runs the obstruction with forms from [`enumerate_forms`].
pub fn slicing_obstruction(query: &SliceQuery, opts: &CheckOptions) -> Result<ObstructionReport> {
    slicing_obstruction_with(query, opts, enumerate_forms, |y| Ok(d_invariants(y)))
}

/// Same, with injectable form and d-table sources (used for caching).
pub fn slicing_obstruction_with<F, D>(
    query: &SliceQuery,
    opts: &CheckOptions,
    forms_for: F,
    dtable_for: D,
) -> Result<ObstructionReport>
where
    F: Fn(&FormConstraints) -> Result<Vec<GramMatrix>>,
    D: Fn(&LensSpace) -> Result<DTable>,
{
    let start = Instant::now();
    let k = query.knot.two_bridge.ok_or_else(|| {
        Error::InvalidQuery(format!("{} has no two-bridge presentation", query.knot.name))
    })?;
    let (canon, mirrored) = knots::canonical(&k);
    let sigma = knots::signature(&canon);
    let mut report = ObstructionReport {
        knot: query.knot.name.clone(),
        two_bridge: canon,
        mirrored,
        signature: sigma,
        p: query.p,
        n: query.n,
        determinants_tried: Vec::new(),
        determinants_skipped: Vec::new(),
        forms: Vec::new(),
        conclusion: Conclusion::NotObstructed,
        notes: Vec::new(),
        wall_time_ms: 0,
    };
    let half = sigma / 2;
    let finish = |mut r: ObstructionReport| {
        r.wall_time_ms = start.elapsed().as_millis() as u64;
        Ok(r)
    };
    if (query.n as i64) < half {
        report.conclusion = Conclusion::Obstructed;
        report.notes.push(format!("signature bound: need n ≥ σ/2 = {half}"));
        return finish(report);
    }
    if query.n as i64 > half {
        return Err(Error::InvalidQuery(format!(
            "n = {} exceeds σ/2 = {half}; only n = σ/2 is covered",
            query.n
        )));
    }
    let r = (query.p + query.n) as usize;
    let det_k = canon.p;
    let admissible = admissible_determinants(det_k);
    if r == 0 {
        if det_k == 1 {
            report.notes.push("rank zero and |H₁| = 1: nothing to check".into());
        } else if admissible.contains(&1) {
            report.notes.push("rank zero with square determinant is not examined".into());
        } else {
            report.conclusion = Conclusion::Obstructed;
            report.notes.push("rank zero requires a square determinant".into());
        }
        return finish(report);
    }
    let y = knots::branched_double_cover(&canon);
    let mut spaces = vec![y];
    if sigma == 0 {
        spaces.push(y.reversed());
    }
    let tables: Vec<DTable> = spaces.iter().map(&dtable_for).collect::<Result<_>>()?;
    let mut all_obstructed = true;
    for d in admissible {
        if d != det_k && !opts.allow_square_quotient {
            report.determinants_skipped.push(d);
            continue;
        }
        report.determinants_tried.push(d);
        let c = FormConstraints::new(r, d, query.n as usize)?;
        let forms = forms_for(&c)?;
        let checked: Vec<FormReport> = forms
            .par_iter()
            .map(|q| -> Result<FormReport> {
                let verdicts = tables.iter().map(|t| check_form(q, t, opts)).collect::<Result<Vec<_>>>()?;
                let obstructed = verdicts.iter().all(|v| v.obstructed);
                Ok(FormReport { gram: q.clone(), determinant: d, obstructed, verdicts })
            })
            .collect::<Result<_>>()?;
        all_obstructed &= checked.iter().all(|f| f.obstructed);
        report.forms.extend(checked);
    }
    if !report.determinants_skipped.is_empty() {
        all_obstructed = false;
        report.notes.push(format!(
            "determinants {:?} admissible but not examined; enable square-quotient mode to include them",
            report.determinants_skipped
        ));
    }
    report.conclusion = if all_obstructed { Conclusion::Obstructed } else { Conclusion::NotObstructed };
    finish(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::Orientation;
    use num_traits::Zero;

    fn g(rows: &[Vec<i64>]) -> GramMatrix {
        GramMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn class_count_and_parity() {
        let q = g(&[vec![2, 1], vec![1, 8]]);
        let cl = characteristic_classes(&q).unwrap();
        assert_eq!(cl.len(), 15);
        for c in &cl {
            assert!(c.min_square.is_positive() || c.min_square.is_zero());
        }
        // Even form: the zero vector is characteristic.
        let e8ish = g(&[vec![2, 1], vec![1, 2]]);
        let cl = characteristic_classes(&e8ish).unwrap();
        assert_eq!(cl.len(), 3);
        assert!(cl.iter().any(|c| c.min_square.is_zero()));
    }

    #[test]
    fn seven_four_form() {
        let q = g(&[vec![2, 1], vec![1, 8]]);
        for o in [Orientation::Positive, Orientation::Reversed] {
            let dt = d_invariants(&LensSpace::new(15, 4, o).unwrap());
            let v = check_form(&q, &dt, &CheckOptions::default()).unwrap();
            assert_eq!(v.matchings_tried, 120);
            assert!(v.obstructed, "{o:?}");
        }
        let q = g(&[vec![4, 1], vec![1, 4]]);
        let dt = d_invariants(&LensSpace::new(15, 4, Orientation::Positive).unwrap());
        assert!(!check_form(&q, &dt, &CheckOptions::default()).unwrap().obstructed);
    }

    #[test]
    fn determinant_mismatch() {
        let q = g(&[vec![2, 1], vec![1, 8]]);
        let dt = d_invariants(&LensSpace::new(13, 5, Orientation::Positive).unwrap());
        assert!(matches!(check_form(&q, &dt, &CheckOptions::default()), Err(Error::DeterminantMismatch { .. })));
    }
}
