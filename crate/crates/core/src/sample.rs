//! Random parity-valid chamber vectors, drawn from polygons.
//!
//! A vector is built geometrically: random integral side lengths, closed up
//! by two more sides, three cut sizes, and the widths for b21..b23. The
//! result is then checked against the lattice independently.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chamber::NVector;
use crate::ias::{fan, moment_polytope, OPPOSITE_SIDES, Q};
use crate::lattice::{roots, AVector, CORNERS, NR};

/// a_i must be even for odd i and for every i >= 18.
pub fn parity_ok(a: &AVector) -> bool {
    (0..NR).all(|i| (i < 18 && i % 2 == 0) || a.0[i] % 2 == 0)
}

/// Integral side lengths summing to zero around the fan, or None.
fn closed_lengths<R: Rng>(rng: &mut R) -> Option<[i64; 18]> {
    let f = fan();
    let mut len = [0i64; 18];
    let bumps = rng.gen_range(1..=8);
    for _ in 0..bumps {
        len[rng.gen_range(0..18)] += rng.gen_range(1..=3);
    }
    let (sx, sy) = (0..18).fold((0, 0), |(x, y), i| {
        let w = f.direction(i);
        (x + len[i] * w.0, y + len[i] * w.1)
    });
    let mut pairs: Vec<(usize, usize)> = (0..18).flat_map(|s| (s + 1..18).map(move |t| (s, t))).collect();
    pairs.shuffle(rng);
    for (s, t) in pairs {
        let (ws, wt) = (f.direction(s), f.direction(t));
        let det = ws.0 * wt.1 - ws.1 * wt.0;
        if det == 0 {
            continue;
        }
        // x ws + y wt = -(sx, sy)
        let xn = -sx * wt.1 + sy * wt.0;
        let yn = -ws.0 * sy + ws.1 * sx;
        if xn % det != 0 || yn % det != 0 {
            continue;
        }
        let (x, y) = (xn / det, yn / det);
        if x >= 0 && y >= 0 {
            len[s] += x;
            len[t] += y;
            return Some(len);
        }
    }
    None
}

/// One attempt; None when the draw is rejected.
pub fn try_vector<R: Rng>(rng: &mut R, max_entry: i64) -> Option<AVector> {
    let bbar = closed_lengths(rng)?;
    let poly = moment_polytope(&bbar.map(Q::from_integer)).ok()?;
    let mut b = [0i64; NR];
    b[..18].copy_from_slice(&bbar);
    for (k, &s) in CORNERS.iter().enumerate() {
        let cut = rng.gen_range(0..=bbar[s].min(3));
        b[s] -= cut;
        b[18 + k] = cut;
        let width = poly.width(s, OPPOSITE_SIDES[k])?;
        if !width.is_integer() {
            return None;
        }
        b[21 + k] = width.to_integer() - cut;
    }
    let a = AVector(std::array::from_fn(|i| if i < 18 && i % 2 == 0 { b[i] } else { 2 * b[i] }));
    if a.0.iter().any(|&x| x < 0 || x > max_entry) {
        return None;
    }
    NVector::from_a(&a).ok()?;
    roots().norm(&a).ok()?.is_positive().then_some(a)
}

pub fn random_vector<R: Rng>(rng: &mut R, max_entry: i64) -> AVector {
    loop {
        if let Some(a) = try_vector(rng, max_entry) {
            return a;
        }
    }
}

/// Fraction of geometric draws that the lattice rejects; should be zero.
pub fn lattice_rejections<R: Rng>(rng: &mut R, draws: usize) -> usize {
    let mut bad = 0;
    for _ in 0..draws {
        let Some(bbar) = closed_lengths(rng) else { continue };
        let poly = moment_polytope(&bbar.map(Q::from_integer)).expect("closed by construction");
        let mut a = [0i64; NR];
        for i in 0..18 {
            a[i] = if i % 2 == 0 { bbar[i] } else { 2 * bbar[i] };
        }
        for (k, &s) in CORNERS.iter().enumerate() {
            let w = poly.width(s, OPPOSITE_SIDES[k]).unwrap();
            a[21 + k] = 2 * w.to_integer();
        }
        if NVector::from_a(&AVector(a)).is_err() {
            bad += 1;
        }
    }
    bad
}
