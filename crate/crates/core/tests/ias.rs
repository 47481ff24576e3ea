use std::collections::BTreeMap;

use k3deg2::chamber::rho;
use k3deg2::ias::*;
use k3deg2::lattice::{roots, AVector};
use k3deg2::sample::random_vector;
use k3deg2::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sec95() -> AVector {
    let mut p: BTreeMap<usize, i64> = std::iter::once(18).chain(0..=16).map(|i| (i, 0)).collect();
    p.insert(17, 6);
    roots().complete_a(&p).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn fan_is_a_smooth_complete_fan() {
    let f = fan();
    for i in 0..18 {
        let (u, v) = (f.normal(i), f.normal((i + 1) % 18));
        assert_eq!(u.0 * v.1 - u.1 * v.0, 1, "cone {i}");
    }
    // for a smooth complete toric surface with n rays, sum of -D_i^2 is 3n - 12
    assert_eq!(f.d.iter().sum::<i64>(), 3 * 18 - 12);
    for s in [0, 3, 6] {
        let (p, q) = (f.normal(s), f.normal(s + 9));
        assert_eq!((p.0 + q.0, p.1 + q.1), (0, 0));
    }
}

#[test]
fn rho_volume() {
    let s = sphere(&rho()).unwrap();
    assert_eq!(s.volume(), Q::from_integer(798));
    assert_eq!(s.total_charge(), 24);
}

#[test]
fn worked_example_locus() {
    let l = singular_locus(&sec95()).unwrap();
    let mut shapes: Vec<(String, u32)> = l.clusters.iter().map(|c| (c.shape.clone(), c.charge())).collect();
    shapes.sort();
    assert_eq!(
        shapes,
        vec![
            ("I1".to_string(), 1),
            ("I1".to_string(), 1),
            ("I1".to_string(), 1),
            ("I1".to_string(), 1),
            ("^A18-".to_string(), 20)
        ]
    );
    assert_eq!(l.total_charge(), 24);
    assert!(l.coincidences.is_empty());
}

#[test]
fn worked_example_equator() {
    let e = equator_divisor(&sphere(&sec95()).unwrap());
    assert!(e.balanced);
    assert_eq!(e.self_intersection, 18);
}

#[test]
fn volume_equals_norm() {
    let mut r = rng(1);
    for _ in 0..150 {
        let a = random_vector(&mut r, 20);
        let s = sphere(&a).unwrap();
        assert_eq!(s.volume(), Q::from_integer(roots().norm_i(&a).unwrap()), "{:?}", a.0);
    }
}

#[test]
fn placements_agree_on_volume() {
    let mut r = rng(2);
    for _ in 0..60 {
        let a = random_vector(&mut r, 16);
        let vp = symington(&a, Placement::VertexPreferred).unwrap();
        if let Ok(sym) = symington(&a, Placement::Symmetric) {
            assert_eq!(sym.area2(), vp.area2());
        }
    }
}

#[test]
fn cut_apexes_sit_at_opposite_distance() {
    let mut r = rng(3);
    for _ in 0..60 {
        let a = random_vector(&mut r, 20);
        let p = symington(&a, Placement::VertexPreferred).unwrap();
        for k in 0..3 {
            assert_eq!(p.opposite_distance(k), p.b[21 + k], "{:?} cut {k}", a.0);
        }
    }
}

#[test]
fn circumference_is_twice_the_width() {
    let mut r = rng(4);
    for _ in 0..80 {
        let a = random_vector(&mut r, 20);
        let s = sphere(&a).unwrap();
        for d in [Direction::ThreeTwelve, Direction::EightSixteen] {
            if let Some(w) = s.geometric_circumference(d) {
                assert_eq!(w, Q::from_integer(s.circumference(d)), "{:?} {}", a.0, d.name());
            }
        }
    }
}

#[test]
fn clusters_carry_their_profile_charge() {
    let mut r = rng(5);
    for _ in 0..80 {
        let a = random_vector(&mut r, 20);
        for c in predicted_clusters(&a).unwrap() {
            assert_eq!(c.data.charge() as usize, c.points.len(), "{} in {:?}", c.shape, a.0);
        }
        let l = singular_locus(&a).unwrap();
        assert_eq!(l.total_charge(), 24);
    }
}

#[test]
fn listed_tags_match_the_vector() {
    let mut r = rng(6);
    let mut seen_two = 0;
    for _ in 0..3000 {
        let a = random_vector(&mut r, 12);
        let l = singular_locus(&a).unwrap();
        for c in &l.coincidences {
            if let Some(tag) = c.listed {
                assert_eq!(listed_exception(&a), Some(tag));
            }
        }
        if listed_exception(&a) == Some("2") {
            seen_two += 1;
            assert!(l.coincidences.iter().any(|c| c.listed == Some("2")), "{:?}", a.0);
        }
    }
    assert!(seen_two > 0);
}

#[test]
fn isotropic_vectors_give_intervals() {
    let mut a = [0i64; 24];
    a[3] = 2;
    a[12] = 1;
    a[21] = 6;
    a[22] = 6;
    let a = AVector(a);
    match build(&a, Placement::Symmetric).unwrap() {
        Built::Interval(i) => {
            assert_eq!(i.parabolic, "~E8^2~A1");
            assert!(i.in_equator);
            assert_eq!(i.multiple, ray_multiple(&a));
        }
        Built::Sphere(_) => panic!("expected an interval"),
    }
}

#[test]
fn bad_vectors_are_rejected() {
    assert_eq!(sphere(&AVector::zero()).unwrap_err(), Error::ZeroVolume);
    assert!(build(&AVector::zero(), Placement::Symmetric).is_err());
    let mut a = sec95();
    a.0[0] = -2;
    assert_eq!(sphere(&a).unwrap_err(), Error::NotInCone);
}

#[test]
fn svg_is_version_1_1() {
    let svg = svg::render(&sphere(&sec95()).unwrap()).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("version=\"1.1\""));
    assert!(svg.contains("<polygon"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn json_has_volume_and_charge() {
    let j = sphere(&sec95()).unwrap().to_json();
    assert_eq!(j["total_charge"], 24);
    assert_eq!(j["volume"], 38);
}
