//! Property bodies shared by the lemma suite and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::Rng;
use slicing_core::knots::{self, TwoBridgeKnot};
use slicing_core::lattice::halfint::det_mod4_from_parities;
use slicing_core::lattice::intmat;
use slicing_core::lattice::{
    detect_half_integer_type, extend_basis_odd_index, half_integer_gram, lift_gl_mod2, mod4_congruence_holds,
    normalize_mod2_block, promote_half_integer, GramMatrix, HalfIntBasis, Parity, UnimodularMap,
};

use crate::oracles;
use crate::support::{big, rng, unimodular, x_block};

pub type Check = Result<(), TestCaseError>;

fn parities(x: &[Vec<i64>]) -> Vec<Parity> {
    (0..x.len()).map(|i| if x[i][i] % 2 == 0 { Parity::Even } else { Parity::Odd }).collect()
}

fn sorted(mut p: Vec<Parity>) -> Vec<Parity> {
    p.sort_by_key(|&x| x == Parity::Odd);
    p
}

pub fn seed_and_r(max_r: usize) -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..=max_r)
}

pub fn odd_p_and_q() -> impl Strategy<Value = (u64, u64)> {
    ((1u64..=200).prop_map(|k| 2 * k + 1), 1u64..400)
}

/// Scrambled half-integer forms of rank 2–8 satisfy the mod-4 determinant
/// congruence, both for the known basis and for a detected one.
pub fn determinant_mod_four(seed: u64, r: usize) -> Check {
    let mut g = rng(seed);
    let x = x_block(&mut g, r);
    let q = half_integer_gram(&big(&x)).unwrap();
    let u = unimodular(&mut g, 2 * r);
    let scrambled = q.transform(&u).unwrap();
    let cert = HalfIntBasis {
        r,
        basis_change: UnimodularMap::new(intmat::inverse_unimodular(&u).unwrap()).unwrap(),
        parities: parities(&x),
    };
    prop_assert!(mod4_congruence_holds(&scrambled, &cert).unwrap());
    let det4 = scrambled.determinant().mod_floor(&BigInt::from(4));
    prop_assert_eq!(det4, BigInt::from(det_mod4_from_parities(&cert.parities)));
    if r <= 3 {
        let found = detect_half_integer_type(&scrambled).unwrap();
        prop_assert!(found.is_some(), "half-integer form not detected");
        let found = found.unwrap();
        prop_assert!(mod4_congruence_holds(&scrambled, &found).unwrap());
        prop_assert_eq!(found.n_even(), cert.n_even());
    }
    Ok(())
}

/// Lifts of invertible F₂ matrices (given by arbitrary integer
/// representatives) are unimodular and reduce to the input.
pub fn lift_mod_two(seed: u64, n: usize) -> Check {
    let mut g = rng(seed);
    let bits = loop {
        let b: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| g.gen_range(0..2)).collect()).collect();
        if intmat::rank_mod2(&b) == n {
            break b;
        }
    };
    let input: Vec<Vec<i64>> =
        bits.iter().map(|row| row.iter().map(|&b| b as i64 + 2 * g.gen_range(-3..=3)).collect()).collect();
    let lift = lift_gl_mod2(&input).unwrap();
    prop_assert!(intmat::det(lift.matrix()).abs() == BigInt::from(1));
    for i in 0..n {
        for j in 0..n {
            prop_assert_eq!(intmat::mod2(&lift.matrix()[i][j]), bits[i][j]);
        }
    }
    Ok(())
}

/// Block normalization keeps the determinant and the parities of the `X`
/// diagonal, with `P = [[I, *], [0, I]]`.
pub fn block_normalization(seed: u64, r: usize) -> Check {
    let mut g = rng(seed);
    let x = x_block(&mut g, r);
    let n = 2 * r;
    let mut q = vec![vec![0i64; n]; n];
    for i in 0..r {
        q[i][i] = 2;
        for j in 0..r {
            let v = (i == j) as i64 + 2 * g.gen_range(-2..=2);
            q[i][r + j] = v;
            q[r + j][i] = v;
            q[r + i][r + j] = x[i][j];
        }
    }
    let q = GramMatrix::from_i64(&q).unwrap();
    let (p, out) = normalize_mod2_block(&q).unwrap();
    prop_assert_eq!(out.determinant(), q.determinant());
    for i in 0..n {
        for j in 0..n {
            if j < r || i >= r {
                prop_assert_eq!(p.matrix()[i][j].clone(), BigInt::from((i == j) as i64));
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            prop_assert_eq!(out.get(i, j).clone(), BigInt::from(if i == j { 2 } else { 0 }));
            prop_assert_eq!(out.get(i, r + j).clone(), BigInt::from((i == j) as i64));
        }
        prop_assert_eq!(intmat::mod2(out.get(r + i, r + i)), intmat::mod2(q.get(r + i, r + i)));
    }
    Ok(())
}

/// An odd-index overlattice of a half-integer lattice is half-integer with
/// the same parity multiset; the intermediate basis is congruent mod 2.
pub fn odd_index_promotion(seed: u64, r: usize) -> Check {
    let mut g = rng(seed);
    let x = x_block(&mut g, r);
    let n = 2 * r;
    let q_m = half_integer_gram(&big(&x)).unwrap();
    // L = ⟨xᵢ, lᵢ·yᵢ − (lᵢ − 1)/2·xᵢ⟩ has odd index Π lᵢ and is half-integer.
    let mut t = vec![vec![0i64; n]; n];
    for i in 0..r {
        let l: i64 = [1, 3, 5, 7][g.gen_range(0..4)];
        t[i][i] = 1;
        t[r + i][r + i] = l;
        t[i][r + i] = -(l - 1) / 2;
    }
    let t = big(&t);
    let q_l = GramMatrix::new(intmat::congruence(q_m.entries(), &t)).unwrap();
    let l_parities: Vec<Parity> =
        (0..r).map(|i| if q_l.get(r + i, r + i).is_even() { Parity::Even } else { Parity::Odd }).collect();

    let u = unimodular(&mut g, n);
    let v = unimodular(&mut g, n);
    let q_m_s = q_m.transform(&u).unwrap();
    let inclusion = intmat::mul(&intmat::mul(&intmat::inverse_unimodular(&u).unwrap(), &t), &v);
    let b_l = HalfIntBasis {
        r,
        basis_change: UnimodularMap::new(intmat::inverse_unimodular(&v).unwrap()).unwrap(),
        parities: l_parities.clone(),
    };

    let ext = extend_basis_odd_index(&q_m_s, &inclusion, &b_l).unwrap();
    for i in 0..n {
        for j in 0..n {
            prop_assert_eq!(intmat::mod2(ext.gram.get(i, j)), intmat::mod2(q_l.get(i, j)));
        }
    }
    let b_m = promote_half_integer(&q_m_s, &inclusion, &b_l).unwrap();
    b_m.validate(&q_m_s).unwrap();
    prop_assert_eq!(sorted(b_m.parities.clone()), sorted(l_parities));
    let found = detect_half_integer_type(&q_m_s).unwrap();
    prop_assert!(found.is_some(), "overlattice not detected");
    prop_assert_eq!(found.unwrap().n_even(), b_m.n_even());
    Ok(())
}

/// Diagram signatures agree with the floor-sum formula and satisfy
/// `det ≡ σ + 1 (mod 4)`.
pub fn murasugi(p: u64, q: u64) -> Check {
    // Step to the next unit mod p so that every case is a knot.
    let mut q = q % p;
    while q == 0 || p.gcd(&q) != 1 {
        q = (q + 1) % p;
    }
    let k = TwoBridgeKnot::new(p, q).unwrap();
    let s = knots::signature(&k);
    prop_assert_eq!(s, oracles::floor_sum_signature(p as i64, q as i64));
    prop_assert_eq!((p as i64 - s - 1).rem_euclid(4), 0);
    prop_assert_eq!(knots::signature(&k.mirror()), -s);
    Ok(())
}
