use k3deg2::diagrams::*;
use k3deg2::lattice::{mask_to_vec, vec_to_mask, CYCLE_MASK};

const COUNTS: [u64; 18] =
    [6, 51, 328, 1518, 5406, 14979, 33132, 59339, 87077, 105236, 105078, 86505, 58223, 31564, 13371, 4209, 883, 99];

#[test]
fn orbit_counts_by_rank() {
    for (r, &want) in (1..=18).zip(COUNTS.iter()) {
        assert_eq!(enumerate_elliptic(r, Modulo::S3).count, want, "rank {r}");
    }
    assert_eq!(census().reps[19].len(), 0);
}

#[test]
fn orbit_stabilizer_audit() {
    let sym = automorphism_group();
    for r in [1, 2, 9, 17, 18] {
        let total: u64 = census().reps[r]
            .iter()
            .map(|&m| {
                let mut o: Vec<u32> = sym.s3.iter().map(|p| p.apply(m)).collect();
                o.sort_unstable();
                o.dedup();
                o.len() as u64
            })
            .sum();
        assert_eq!(total, census().all[r], "rank {r}");
    }
}

#[test]
fn elliptic_sets_pass_exact_definiteness() {
    // the combinatorial search agrees with Bareiss on a spread of representatives
    for r in 1..=18 {
        for &m in census().reps[r].iter().step_by(97) {
            let s = classify(m);
            assert_eq!(s.class, Class::Elliptic, "{:?}", mask_to_vec(m));
            assert_eq!(s.rank, r);
        }
    }
}

#[test]
fn four_maximal_parabolics() {
    let found = maximal_parabolics();
    assert_eq!(found.len(), 4);
    let sym = automorphism_group();
    let mut named: Vec<u32> = named_parabolics().iter().map(|(_, m)| sym.s3_canonical(*m)).collect();
    named.sort_unstable();
    assert_eq!(found, named);
    let d16 = named_parabolics()[3].1;
    assert_eq!(mask_to_vec(d16), vec![0, 1, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 23]);
}

#[test]
fn every_parabolic_lies_in_a_maximal_one() {
    let max = all_maximal_parabolics();
    for &p in &census().parabolic {
        assert!(max.iter().any(|&m| p & m == p), "{:?}", mask_to_vec(p));
    }
}

#[test]
fn classify_examples() {
    assert_eq!(classify(1).class, Class::Elliptic);
    assert_eq!(classify(CYCLE_MASK).class, Class::Parabolic);
    assert_eq!(classify((1 << 24) - 1).class, Class::Indefinite);
}

#[test]
fn shape_examples() {
    let d = vec_to_mask(&[18, 17, 0, 1, 2, 3, 4, 5, 6, 19]);
    assert_eq!(shape(d).unwrap().to_string(), "D10'");
    assert_eq!(shape(vec_to_mask(&[3, 23])).unwrap().to_string(), "~A1*");
    assert_eq!(shape(vec_to_mask(&[21])).unwrap().to_string(), "irr:vA1-");
}

#[test]
fn shape_is_symmetry_invariant() {
    let g = graph();
    let sym = automorphism_group();
    for c in connected_elliptic().into_iter().step_by(7) {
        assert_eq!(g.components(c).len(), 1);
        let s = shape(c).unwrap();
        for p in &sym.s3 {
            assert_eq!(shape(p.apply(c)).unwrap(), s);
        }
    }
}

#[test]
fn relevant_content_examples() {
    let (_, e8) = named_parabolics()[2];
    assert_eq!(relevant_content(e8), e8 & !vec_to_mask(&[20, 23]));
    assert_eq!(relevant_content(0b11), 0b11);
    assert_eq!(relevant_content(vec_to_mask(&[20, 23])), 0);
}

#[test]
fn group_has_order_six() {
    let sym = automorphism_group();
    assert_eq!(sym.s3.len(), 6);
    assert!(sym.s3[0].is_identity());
    let corners = vec_to_mask(&[0, 6, 12]);
    assert!(sym.s3.iter().all(|p| p.apply(corners) == corners));
}
