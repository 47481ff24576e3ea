use std::collections::BTreeMap;

use k3deg2::chamber::*;
use k3deg2::lattice::{roots, AVector, NR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sec95() -> AVector {
    let mut p = BTreeMap::new();
    for i in [18, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16] {
        p.insert(i, 0);
    }
    p.insert(17, 6);
    roots().complete_a(&p).unwrap()
}

#[test]
fn divisor_count() {
    let d = count_boundary_divisors();
    assert_eq!((d.type_ii, d.type_iii), (3, 35));
    assert_eq!(d.dropped, vec!["~E8^2~A1".to_string()]);
    assert_eq!(d.toroidal_rays, 103);
}

#[test]
fn sec95_is_a_type_iii_ray() {
    let a = sec95();
    assert!(in_fundamental(&a));
    let c = cone_of(&a).unwrap();
    assert_eq!(c.kind, ConeType::III);
    assert_eq!(c.tor_dim, 18);
    assert_eq!(c.slc_dim, 18);
}

#[test]
fn isotropic_directions_are_type_ii() {
    let mut a = [0i64; NR];
    a[3] = 2;
    a[12] = 1;
    a[21] = 6;
    a[22] = 6;
    let c = cone_of(&AVector(a)).unwrap();
    assert_eq!(c.kind, ConeType::II);
    assert_eq!(c.parabolic.as_deref(), Some("~E8^2~A1"));
    assert_eq!(c.slc_dim, 17);
}

#[test]
fn cone_is_constant_on_rays() {
    let a = sec95();
    let c = cone_of(&a).unwrap();
    for k in [2, 5] {
        assert_eq!(cone_of(&a.scale(k)).unwrap(), c);
    }
}

#[test]
fn semifan_merges_irrelevant_components() {
    let r = rho();
    assert_eq!(semifan_cone(&r), (0, 0));
    let mut a = r;
    a.0[20] = 0;
    a.0[23] = 0;
    assert_eq!(semifan_cone(&a).1, 0);
}

#[test]
fn random_words_reduce_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = NVector::from_a(&rho()).unwrap();
    for _ in 0..100 {
        let len = rng.gen_range(0..=12);
        let mut v = base;
        for _ in 0..len {
            v = v.reflect(rng.gen_range(0..NR));
        }
        let red = reduce_to_fundamental(&v).unwrap();
        // rho is interior, so its orbit meets the chamber only in rho
        assert_eq!(red.v, base);
        assert!(red.certificate.windows(2).all(|w| w[1] < w[0]));
        let again = reduce_to_fundamental(&red.v).unwrap();
        assert!(again.word.is_empty());
    }
}

#[test]
fn outside_cone_is_rejected() {
    let v = NVector::root(4);
    assert!(reduce_to_fundamental(&v).is_err());
}
