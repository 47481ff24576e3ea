use std::collections::BTreeMap;

use k3deg2::chamber::rho;
use k3deg2::kulikov::*;
use k3deg2::lattice::{roots, vec_to_mask, AVector};
use k3deg2::sample::random_vector;
use k3deg2::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complete(zeros: &[usize], set: &[(usize, i64)]) -> AVector {
    let mut p: BTreeMap<usize, i64> = zeros.iter().map(|&i| (i, 0)).collect();
    p.extend(set.iter().copied());
    roots().complete_a(&p).unwrap()
}

fn sec95() -> AVector {
    let z: Vec<usize> = std::iter::once(18).chain(0..=16).collect();
    complete(&z, &[(17, 6)])
}

#[test]
fn rho_golden_counts() {
    let t = triangulate(&rho()).unwrap();
    assert_eq!((t.v(), t.e(), t.f()), (401, 1197, 798));
    assert_eq!((t.v_equator(), t.e_equator()), (27, 27));
    assert_eq!(eigenranks(&t), (1, 18));
    let s = t.stats();
    assert_eq!((s.q_eq, s.q_north), (18, 3));
}

#[test]
fn worked_example_counts_and_plan() {
    let a = sec95();
    let t = triangulate(&a).unwrap();
    assert_eq!((t.v(), t.e(), t.f()), (21, 57, 38));
    assert_eq!((t.v_equator(), t.e_equator()), (3, 3));
    let plan = contraction_plan(&t, &a).unwrap();
    assert_eq!(plan.nontrivial(), 3);
    assert_eq!(plan.big, 1);
    assert_eq!(plan.nef_not_big, 2);
    let label = stable_model_label(&a).unwrap();
    assert_eq!(label.label, "^A18-");
    assert_eq!(label.kind, "III");
}

#[test]
fn dimension_formula() {
    // Euler: for a sphere with v vertices, e = 3v - 6; the dimension is 19
    // exactly when charge is 24.
    for v in [4usize, 21, 401] {
        assert_eq!(dsemistable_from_counts(v, 3 * v - 6), 19);
    }
}

#[test]
fn parity_is_enforced() {
    let mut a = sec95();
    a.0[17] = 5;
    assert!(!parity_check(&a));
    assert_eq!(parity_violation(&a), Some(17));
    assert!(matches!(triangulate(&a), Err(Error::ParityViolation(17))));
    assert!(parity_check(&rho()));
}

#[test]
fn empty_zero_set_is_the_generic_stratum() {
    let l = label_of_mask(0).unwrap();
    assert_eq!(l.kind, "III");
    assert_eq!(l.group, "D9");
}

#[test]
fn labels_are_symmetry_invariant() {
    let sym = k3deg2::diagrams::automorphism_group();
    for g in [vec_to_mask(&[18, 0, 1, 2, 3, 4, 5, 6, 19]), vec_to_mask(&[0, 1, 2, 3, 20])] {
        let l = label_of_mask(g).unwrap().label;
        for p in &sym.s3 {
            assert_eq!(label_of_mask(p.apply(g)).unwrap().label, l);
        }
    }
}

#[test]
fn type_ii_models() {
    let a17 = complete(&(0..18).collect::<Vec<_>>(), &[(18, 2)]);
    let m = type_ii_model(&a17).unwrap();
    assert_eq!(m.m, 2);
    let fates: Vec<Fate> = m.components.iter().map(|c| c.fate).collect();
    assert_eq!(fates, [Fate::NefNotBig, Fate::Big, Fate::NefNotBig]);

    let d10e7: Vec<usize> = [18, 17, 0, 1, 2, 3, 4, 5, 6, 7, 19, 9, 10, 11, 12, 13, 14, 15, 20].to_vec();
    let m = type_ii_model(&complete(&d10e7, &[(8, 2)])).unwrap();
    assert_eq!(m.components.len(), 3);
    assert_eq!(m.components[0].fate, Fate::Big);
    assert_eq!(m.components[2].fate, Fate::Big);
    assert_eq!(stable_model_label(&complete(&d10e7, &[(8, 2)])).unwrap().label, "~D10/~E7");
}

#[test]
fn odd_multiple_is_rejected_where_needed() {
    let mut a = [0i64; 24];
    a[3] = 2;
    a[12] = 1;
    a[21] = 6;
    a[22] = 6;
    assert!(matches!(type_ii_model(&AVector(a)), Err(Error::OddMultiple(1, _))));
    let doubled = AVector(a).scale(2);
    let m = type_ii_model(&doubled).unwrap();
    assert_eq!(m.m, 2);
    assert_eq!(m.components[1].surface, "ruled surface of the irrelevant ~A1");
}

#[test]
fn summary_shapes() {
    let s = summary(&sec95()).unwrap();
    assert_eq!(s["label"]["label"], "^A18-");
    assert_eq!(s["triangulation"]["f"], 38);
    let z = summary(&complete(&(0..18).collect::<Vec<_>>(), &[(18, 2)])).unwrap();
    assert_eq!(z["type_ii"]["parabolic"], "~A17");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn triangulation_invariants(seed in any::<u64>()) {
        let a = random_vector(&mut ChaCha8Rng::seed_from_u64(seed), 16);
        let t = triangulate(&a).unwrap();
        prop_assert_eq!(t.f() as i64, roots().norm_i(&a).unwrap());
        prop_assert_eq!(t.e() as i64 - 3 * t.v() as i64, -6);
        prop_assert_eq!(t.euler(), 2);
        prop_assert_eq!(dsemistable_dimension(&t), 19);
        prop_assert_eq!(eigenranks(&t), (1, 18));
        prop_assert_eq!(t.total_charge(), 24);
        // the equator is a cycle
        prop_assert_eq!(t.v_equator(), t.e_equator());
    }

    #[test]
    fn scaling_scales_faces(seed in any::<u64>()) {
        let a = random_vector(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let f1 = triangulate(&a).unwrap().f();
        let f2 = triangulate(&a.scale(2)).unwrap().f();
        prop_assert_eq!(f2, 4 * f1);
    }
}
