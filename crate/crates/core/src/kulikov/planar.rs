//! Unimodular triangulations of lattice polygons given as unit-step walks.

use crate::error::{Error, Result};

pub type P2 = (i64, i64);

fn sub(a: P2, b: P2) -> P2 {
    (a.0 - b.0, a.1 - b.1)
}

pub fn det(a: P2, b: P2) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Twice the signed area of the triangle.
pub fn orient(a: P2, b: P2, c: P2) -> i64 {
    det(sub(b, a), sub(c, a))
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Lattice points of the segment (from, to], one per unit step.
pub fn unit_steps(from: P2, to: P2) -> Vec<P2> {
    let d = sub(to, from);
    let g = gcd(d.0, d.1);
    if g == 0 {
        return Vec::new();
    }
    (1..=g).map(|k| (from.0 + d.0 / g * k, from.1 + d.1 / g * k)).collect()
}

/// Drop back-and-forth excursions W[i-1] == W[i+1] until none remain.
pub fn remove_spikes(w: &mut Vec<P2>) {
    loop {
        w.dedup();
        while w.len() > 1 && w.first() == w.last() {
            w.pop();
        }
        let n = w.len();
        if n < 3 {
            if n == 2 {
                w.pop();
            }
            return;
        }
        let Some(i) = (0..n).find(|&i| w[(i + n - 1) % n] == w[(i + 1) % n]) else {
            return;
        };
        let j = (i + 1) % n;
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        w.remove(hi);
        w.remove(lo);
    }
}

pub fn area2(w: &[P2]) -> i64 {
    (0..w.len()).map(|i| det(w[i], w[(i + 1) % w.len()])).sum()
}

/// Split a closed walk at repeated points into simple closed walks.
pub fn simple_pieces(w: Vec<P2>) -> Vec<Vec<P2>> {
    let mut out = Vec::new();
    let mut stack = vec![w];
    while let Some(mut w) = stack.pop() {
        remove_spikes(&mut w);
        if w.len() < 3 {
            continue;
        }
        let mut split = None;
        'outer: for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] == w[j] {
                    split = Some((i, j));
                    break 'outer;
                }
            }
        }
        match split {
            Some((i, j)) => {
                let inner = w[i..j].to_vec();
                let outer = [&w[j..], &w[..i]].concat();
                stack.push(outer);
                stack.push(inner);
            }
            None => out.push(w),
        }
    }
    out
}

fn in_closed_triangle(p: P2, a: P2, b: P2, c: P2) -> bool {
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

/// Ear clipping of a simple counterclockwise polygon. Ears are taken at the
/// first strictly convex vertex whose closed triangle holds no other vertex.
pub fn ear_clip(poly: &[P2]) -> Result<Vec<[P2; 3]>> {
    let mut v = poly.to_vec();
    let mut out = Vec::new();
    while v.len() > 3 {
        let n = v.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            orient(a, b, c) > 0
                && v.iter().enumerate().all(|(k, &p)| {
                    k == i || k == (i + n - 1) % n || k == (i + 1) % n || !in_closed_triangle(p, a, b, c)
                })
        });
        let Some(i) = ear else {
            // only collinear vertices left
            if (0..n).all(|i| orient(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) == 0) {
                return Ok(out);
            }
            return Err(Error::Degenerate("polygon piece has no ear".into()));
        };
        out.push([v[(i + n - 1) % n], v[i], v[(i + 1) % n]]);
        v.remove(i);
    }
    if v.len() == 3 && orient(v[0], v[1], v[2]) > 0 {
        out.push([v[0], v[1], v[2]]);
    } else if v.len() == 3 && orient(v[0], v[1], v[2]) < 0 {
        return Err(Error::Degenerate("clockwise remainder".into()));
    }
    Ok(out)
}

/// Insert every lattice point lying in the triangles, in sorted order, so
/// each final triangle has determinant 1.
pub fn refine(mut tris: Vec<[P2; 3]>) -> Result<Vec<[P2; 3]>> {
    let mut verts: std::collections::BTreeSet<P2> = tris.iter().flatten().copied().collect();
    let mut pts = std::collections::BTreeSet::new();
    for t in &tris {
        let (x0, x1) = (t.iter().map(|p| p.0).min().unwrap(), t.iter().map(|p| p.0).max().unwrap());
        let (y0, y1) = (t.iter().map(|p| p.1).min().unwrap(), t.iter().map(|p| p.1).max().unwrap());
        for x in x0..=x1 {
            for y in y0..=y1 {
                if in_closed_triangle((x, y), t[0], t[1], t[2]) && !verts.contains(&(x, y)) {
                    pts.insert((x, y));
                }
            }
        }
    }
    for p in pts {
        if verts.contains(&p) {
            continue;
        }
        let hits: Vec<usize> =
            (0..tris.len()).filter(|&k| in_closed_triangle(p, tris[k][0], tris[k][1], tris[k][2])).collect();
        let first = *hits.first().ok_or_else(|| Error::Degenerate("lattice point outside triangulation".into()))?;
        let t = tris[first];
        let on_edge = (0..3).find(|&e| orient(t[e], t[(e + 1) % 3], p) == 0);
        match on_edge {
            None => {
                tris.swap_remove(first);
                tris.push([t[0], t[1], p]);
                tris.push([t[1], t[2], p]);
                tris.push([t[2], t[0], p]);
            }
            Some(e) => {
                let (u, w) = (t[e], t[(e + 1) % 3]);
                let mut sharing: Vec<usize> = hits
                    .into_iter()
                    .filter(|&k| {
                        let s = tris[k];
                        (0..3).any(|f| {
                            let (x, y) = (s[f], s[(f + 1) % 3]);
                            (x, y) == (u, w) || (x, y) == (w, u)
                        })
                    })
                    .collect();
                sharing.sort_unstable_by(|a, b| b.cmp(a));
                for k in sharing {
                    let s = tris.swap_remove(k);
                    let f = (0..3).find(|&f| {
                        let (x, y) = (s[f], s[(f + 1) % 3]);
                        (x, y) == (u, w) || (x, y) == (w, u)
                    });
                    let f = f.expect("edge present");
                    let (x, y, z) = (s[f], s[(f + 1) % 3], s[(f + 2) % 3]);
                    tris.push([x, p, z]);
                    tris.push([p, y, z]);
                }
            }
        }
        verts.insert(p);
    }
    for t in &tris {
        if orient(t[0], t[1], t[2]) != 1 {
            return Err(Error::Degenerate(format!("triangle {t:?} is not unimodular")));
        }
    }
    Ok(tris)
}

/// Unimodular triangulation of a closed unit-step walk, spikes and pinches
/// allowed.
pub fn triangulate_walk(walk: Vec<P2>) -> Result<Vec<[P2; 3]>> {
    let mut tris = Vec::new();
    for piece in simple_pieces(walk) {
        match area2(&piece).signum() {
            0 => continue,
            -1 => return Err(Error::Degenerate("clockwise boundary piece".into())),
            _ => tris.extend(ear_clip(&piece)?),
        }
    }
    refine(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(corners: &[P2]) -> Vec<P2> {
        let mut w = Vec::new();
        for i in 0..corners.len() {
            w.extend(unit_steps(corners[i], corners[(i + 1) % corners.len()]));
        }
        w
    }

    #[test]
    fn square_has_pick_count() {
        let t = triangulate_walk(walk(&[(0, 0), (3, 0), (3, 2), (0, 2)])).unwrap();
        assert_eq!(t.len(), 12);
    }

    #[test]
    fn spike_is_removed() {
        let mut w = vec![(0, 0), (1, 0), (2, 0), (1, 0), (1, 1)];
        remove_spikes(&mut w);
        assert_eq!(w, vec![(0, 0), (1, 0), (1, 1)]);
    }

    #[test]
    fn pinched_walk_splits() {
        // two triangles touching at (1,1)
        let w = vec![(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (1, 2), (1, 1), (0, 1)];
        let t = triangulate_walk(w).unwrap();
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn nonconvex_l_shape() {
        let t = triangulate_walk(walk(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(t.len(), 6);
    }
}
