mod oracles;

use std::collections::BTreeSet;

use slicing_core::forms::{enumerate_forms, FormConstraints};
use slicing_core::lattice::{canonical_form, detect_with_even_count, GramMatrix};

#[test]
fn matches_box_search_up_to_det_60() {
    for r in 1..=2usize {
        let reference = oracles::box_forms(r, 60);
        for det in 1..=60u64 {
            for n_even in 0..=r {
                let got: BTreeSet<GramMatrix> = match FormConstraints::new(r, det, n_even) {
                    Ok(c) => enumerate_forms(&c).unwrap().into_iter().collect(),
                    Err(_) => BTreeSet::new(),
                };
                let want = reference.get(&(det, n_even)).cloned().unwrap_or_default();
                assert_eq!(got, want, "r = {r}, det = {det}, n_even = {n_even}");
            }
        }
    }
}

#[test]
fn outputs_are_canonical_and_certified() {
    for (r, det, n_even) in [(2, 15, 1), (2, 45, 0), (3, 15, 1), (3, 51, 3)] {
        let c = FormConstraints::new(r, det, n_even).unwrap();
        for q in enumerate_forms(&c).unwrap() {
            assert_eq!(canonical_form(&q).unwrap(), q);
            assert_eq!(q.determinant(), det.into());
            let b = detect_with_even_count(&q, n_even).unwrap().expect("certificate");
            b.validate(&q).unwrap();
        }
    }
}

#[test]
fn seven_four_candidates() {
    let c = FormConstraints::new(1, 15, 1).unwrap();
    let forms = enumerate_forms(&c).unwrap();
    assert_eq!(forms, vec![GramMatrix::from_i64(&[vec![2, 1], vec![1, 8]]).unwrap()]);
}

#[test]
fn incompatible_parity_is_empty() {
    // det ≡ (−1)^{n_even} (mod 4) fails: 15 ≡ 3 needs an odd count.
    let c = FormConstraints::new(2, 15, 2).unwrap();
    assert!(enumerate_forms(&c).unwrap().is_empty());
}
