use slicing_core::knots::{builtin_knot, KnotRecord, SliceQuery, TwoBridgeKnot};
use slicing_core::lattice::GramMatrix;
use slicing_core::obstruct::{slicing_obstruction, CheckOptions, Conclusion};
use slicing_core::Error;

fn two_bridge(p: u64, q: u64) -> KnotRecord {
    let k = TwoBridgeKnot::new(p, q).unwrap();
    KnotRecord {
        name: format!("S({p},{q})"),
        determinant: p,
        signature: slicing_core::knots::signature(&k),
        two_bridge: Some(k),
        slice_genus: None,
    }
}

#[test]
fn seven_four_is_obstructed() {
    let q = SliceQuery { knot: builtin_knot("7_4").unwrap(), p: 0, n: 1 };
    let rep = slicing_obstruction(&q, &CheckOptions::default()).unwrap();
    assert_eq!(rep.conclusion, Conclusion::Obstructed);
    assert_eq!(rep.forms.len(), 1);
    assert_eq!(rep.forms[0].gram, GramMatrix::from_i64(&[vec![2, 1], vec![1, 8]]).unwrap());
    assert!(rep.forms[0].verdicts.iter().all(|v| v.matchings_tried == 120 && v.obstructed));
    assert!(rep.forms[0].verdicts.iter().all(|v| v.refutations.len() == 120));
}

#[test]
fn mirror_gives_same_verdict() {
    let q = SliceQuery { knot: two_bridge(15, 11), p: 0, n: 1 };
    let rep = slicing_obstruction(&q, &CheckOptions::default()).unwrap();
    assert!(rep.mirrored);
    assert_eq!(rep.conclusion, Conclusion::Obstructed);
}

#[test]
fn unknot_is_not_obstructed() {
    let q = SliceQuery { knot: builtin_knot("unknot").unwrap(), p: 0, n: 0 };
    assert_eq!(slicing_obstruction(&q, &CheckOptions::default()).unwrap().conclusion, Conclusion::NotObstructed);
}

#[test]
fn signature_bound_and_range() {
    let k = builtin_knot("5_1").unwrap();
    let rep = slicing_obstruction(&SliceQuery { knot: k.clone(), p: 3, n: 1 }, &CheckOptions::default()).unwrap();
    assert_eq!(rep.conclusion, Conclusion::Obstructed);
    assert!(rep.forms.is_empty());
    let err = slicing_obstruction(&SliceQuery { knot: k, p: 0, n: 3 }, &CheckOptions::default());
    assert!(matches!(err, Err(Error::InvalidQuery(_))));
}

#[test]
fn square_quotient_mode_can_pass() {
    // det 45 = 5·3²: a det-5 form survives against both orientations of L(45, 8).
    let q = SliceQuery { knot: two_bridge(45, 8), p: 1, n: 0 };
    assert_eq!(q.knot.signature, 0);
    let plain = slicing_obstruction(&q, &CheckOptions::default()).unwrap();
    assert_eq!(plain.determinants_skipped, vec![5]);
    assert_eq!(plain.conclusion, Conclusion::NotObstructed);
    let opts = CheckOptions { allow_square_quotient: true, ..Default::default() };
    let rep = slicing_obstruction(&q, &opts).unwrap();
    let survivor = rep.forms.iter().find(|f| f.determinant == 5 && !f.obstructed).expect("a det-5 survivor");
    assert_eq!(survivor.gram, GramMatrix::from_i64(&[vec![2, 1], vec![1, 3]]).unwrap());
    assert!(survivor.verdicts.iter().all(|v| v.witness.is_some()));
    assert_eq!(rep.conclusion, Conclusion::NotObstructed);
}

#[test]
fn conjugation_requirement_only_strengthens() {
    for name in ["3_1", "5_2", "6_2", "7_4"] {
        let k = builtin_knot(name).unwrap();
        let n = (k.signature / 2) as u32;
        for p in 0..=1 {
            let q = SliceQuery { knot: k.clone(), p, n };
            let loose = slicing_obstruction(&q, &CheckOptions::default()).unwrap();
            let strict = CheckOptions { require_conjugation_symmetry: true, ..Default::default() };
            let strict = slicing_obstruction(&q, &strict).unwrap();
            if loose.conclusion == Conclusion::Obstructed {
                assert_eq!(strict.conclusion, Conclusion::Obstructed, "{name} p = {p}");
            }
        }
    }
}
