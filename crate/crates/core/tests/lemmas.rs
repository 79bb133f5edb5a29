mod lemma_checks;
mod oracles;
mod support;

use proptest::prelude::*;
use slicing_core::knots;
use slicing_core::lattice::intmat;
use slicing_core::lattice::{
    detect_half_integer_type, extend_basis_odd_index, promote_half_integer, GramMatrix, HalfIntBasis, Parity,
    UnimodularMap,
};

use support::big;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn determinant_mod_four_follows_parities((seed, r) in lemma_checks::seed_and_r(4)) {
        lemma_checks::determinant_mod_four(seed, r)?;
    }

    #[test]
    fn lifts_are_unimodular_and_agree_mod_two((seed, n) in lemma_checks::seed_and_r(6)) {
        lemma_checks::lift_mod_two(seed, n)?;
    }

    #[test]
    fn normalization_keeps_determinant_and_parities((seed, r) in lemma_checks::seed_and_r(4)) {
        lemma_checks::block_normalization(seed, r)?;
    }

    #[test]
    fn promotion_across_odd_index_keeps_parities((seed, r) in lemma_checks::seed_and_r(3)) {
        lemma_checks::odd_index_promotion(seed, r)?;
    }

    #[test]
    fn two_bridge_signatures_satisfy_murasugi((p, q) in lemma_checks::odd_p_and_q()) {
        lemma_checks::murasugi(p, q)?;
    }
}

#[test]
fn constructed_knots_satisfy_murasugi() {
    let mut all: Vec<(String, i64, u64)> = knots::builtin_knots()
        .into_iter()
        .map(|k| (k.name.clone(), k.signature, k.determinant))
        .collect();
    for n in 1..=4 {
        let k = knots::kn_family(n).unwrap();
        all.push((format!("K_{n}"), knots::signature(&k), k.p));
    }
    for (name, s, det) in all {
        assert_eq!((det as i64 - s - 1).rem_euclid(4), 0, "{name}");
    }
}

#[test]
fn index_three_example() {
    // M = ⟨x, y⟩ with [[2, 1], [1, 1]], L = ⟨x, 3y − x⟩.
    let q_m = GramMatrix::from_i64(&[vec![2, 1], vec![1, 1]]).unwrap();
    let t = big(&[vec![1, -1], vec![0, 3]]);
    let q_l = GramMatrix::new(intmat::congruence(q_m.entries(), &t)).unwrap();
    assert_eq!(q_l, GramMatrix::from_i64(&[vec![2, 1], vec![1, 5]]).unwrap());
    let b_l = HalfIntBasis { r: 1, basis_change: UnimodularMap::identity(2), parities: vec![Parity::Odd] };
    let b_m = promote_half_integer(&q_m, &t, &b_l).unwrap();
    assert_eq!(b_m.parities, vec![Parity::Odd]);
    assert!(detect_half_integer_type(&q_m).unwrap().is_some());
    let even = extend_basis_odd_index(&q_m, &big(&[vec![2, 0], vec![0, 1]]), &b_l);
    assert!(even.is_err());
}
