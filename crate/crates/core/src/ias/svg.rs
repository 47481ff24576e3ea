//! SVG 1.1 picture of P with its cuts, singular points and equator.

use std::fmt::Write;

use super::{equator_divisor, locus_of, IASphere, Pt, Sheet};
use crate::error::Result;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(points: &[Pt]) -> Frame {
        let xs = points.iter().map(|p| p.to_f64());
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for (x, y) in xs {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1.0);
        Frame { min: lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    /// y grows upwards in the plane and downwards in SVG.
    fn map(&self, p: Pt) -> (f64, f64) {
        let (x, y) = p.to_f64();
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }
}

fn star(out: &mut String, (cx, cy): (f64, f64), r: f64, fill: &str) {
    let pts: Vec<String> = (0..10)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 5.0 - std::f64::consts::FRAC_PI_2;
            let rr = if k % 2 == 0 { r } else { r * 0.45 };
            format!("{:.2},{:.2}", cx + rr * t.cos(), cy + rr * t.sin())
        })
        .collect();
    let _ = writeln!(out, r#"  <polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#, pts.join(" "));
}

pub fn render(s: &IASphere) -> Result<String> {
    let p = &s.polytope;
    let mut all: Vec<Pt> = p.base.vertices.to_vec();
    all.extend(p.cuts.iter().map(|c| c.apex));
    let f = Frame::new(&all);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "  <title>B(a) for a = {:?}</title>", s.a().0);

    let outline: Vec<String> = p
        .base
        .vertices
        .iter()
        .map(|&v| {
            let (x, y) = f.map(v);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r##"  <polygon points="{}" fill="#e8f4e8" stroke="none"/>"##, outline.join(" "));

    for c in p.cuts.iter().filter(|c| c.size > num_traits::Zero::zero()) {
        let t: Vec<String> = c
            .triangle()
            .iter()
            .map(|&v| {
                let (x, y) = f.map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"  <polygon points="{}" fill="white" stroke="gray" stroke-dasharray="4,3" stroke-width="1"/>"#,
            t.join(" ")
        );
        // monodromy-invariant line through the apex, parallel to the side
        let w = Pt::dir(super::fan().direction(c.side));
        let (x1, y1) = f.map(c.apex - w * c.size);
        let (x2, y2) = f.map(c.apex + w * c.size);
        let _ = writeln!(
            out,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="red" stroke-dasharray="2,2" stroke-width="0.8"/>"#
        );
    }

    for e in equator_divisor(s).edges {
        let (x1, y1) = f.map(e.from);
        let (x2, y2) = f.map(e.to);
        let _ = writeln!(
            out,
            r##"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#1f4e9c" stroke-width="{}" stroke-linecap="round"><title>side {} multiplicity {}</title></line>"##,
            1.5 * e.multiplicity as f64,
            e.side,
            e.multiplicity
        );
    }

    for c in locus_of(s)?.clusters {
        let fill = match (c.sheet, c.points.len()) {
            (Sheet::Equator, 1) => "orange",
            (_, 1) => "yellow",
            _ => "crimson",
        };
        star(&mut out, f.map(c.position), 5.0 + c.charge() as f64, fill);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
