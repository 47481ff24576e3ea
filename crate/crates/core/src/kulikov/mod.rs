//! Combinatorial Kulikov models: the involution-invariant unit triangulation
//! of B(a), its dual-complex counts, labels of the stable model and the fate
//! of each component under the contraction.

pub mod planar;

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chamber::in_fundamental;
use crate::diagrams::{automorphism_group, cycle_pieces, graph, relevant_content, shape};
use crate::error::{Error, Result};
use crate::ias::{self, double, predicted_clusters, symington, Placement, Pt, Sheet, Source, SymingtonPolytope};
use crate::lattice::{mask_to_vec, roots, AVector, CYCLE_MASK, INTERIOR_MASK, NR};
use planar::{triangulate_walk, unit_steps, P2};

/// a_i even for odd i < 18 and for every i >= 18.
pub fn parity_check(a: &AVector) -> bool {
    parity_violation(a).is_none()
}

pub fn parity_violation(a: &AVector) -> Option<usize> {
    (0..NR).find(|&i| !(i < 18 && i % 2 == 0) && a.0[i] % 2 != 0)
}

// ---------------------------------------------------------------------------
// union-find

#[derive(Clone, Debug, Default)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Slots are (plane point, copy) for vertices and (unordered pair, copy)
/// for edges; copy 0 is the north half, 1 the south.
#[derive(Default)]
struct Slots {
    vid: HashMap<(P2, u8), usize>,
    eid: HashMap<(P2, P2, u8), usize>,
    v: Dsu,
    e: Dsu,
}

impl Slots {
    fn vertex(&mut self, p: P2, s: u8) -> usize {
        let v = &mut self.v;
        *self.vid.entry((p, s)).or_insert_with(|| v.add())
    }

    fn edge(&mut self, p: P2, q: P2, s: u8) -> usize {
        let key = if p <= q { (p, q, s) } else { (q, p, s) };
        let e = &mut self.e;
        *self.eid.entry(key).or_insert_with(|| e.add())
    }

    /// Identify the segment [p0, p1] with [q0, q1] pointwise, lattice step
    /// by lattice step.
    fn glue_segments(&mut self, p: &[P2], q: &[P2], sp: u8, sq: u8) {
        debug_assert_eq!(p.len(), q.len());
        for k in 0..p.len() {
            let (a, b) = (self.vertex(p[k], sp), self.vertex(q[k], sq));
            self.v.union(a, b);
            if k + 1 < p.len() {
                let (a, b) = (self.edge(p[k], p[k + 1], sp), self.edge(q[k], q[k + 1], sq));
                self.e.union(a, b);
            }
        }
    }
}

fn lattice_points(from: P2, to: P2) -> Vec<P2> {
    std::iter::once(from).chain(unit_steps(from, to)).collect()
}

fn p2(p: Pt) -> Result<P2> {
    if !p.is_integral() {
        return Err(Error::Degenerate(format!("point {p} is not integral")));
    }
    Ok((p.x.to_integer(), p.y.to_integer()))
}

// ---------------------------------------------------------------------------
// triangulation

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fate {
    /// birational onto an involution pair of the stable model
    Big,
    /// contracted to a boundary curve
    NefNotBig,
    /// contracted to a pole
    Trivial,
}

/// A vertex of the dual complex, i.e. a component of the Kulikov surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    /// a plane representative and the copy of P it was taken from
    pub position: P2,
    pub north: bool,
    pub equatorial: bool,
    pub charge: u32,
    /// contains a corner of the moment polygon
    pub corner: bool,
    /// shape of the singular cluster sitting here, if any
    pub shape: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub a: AVector,
    pub polytope: SymingtonPolytope,
    /// unit triangles of P, counterclockwise
    pub planar: Vec<[P2; 3]>,
    pub vertices: Vec<Vertex>,
    /// triangles of B by vertex index; first the north copy, then the south
    pub triangles: Vec<[usize; 3]>,
    /// edges of B by vertex index, with an equatorial flag
    pub edges: Vec<(usize, usize, bool)>,
    pub q_e: u32,
    pub q_n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    #[serde(rename = "e_E")]
    pub e_eq: usize,
    #[serde(rename = "v_E")]
    pub v_eq: usize,
    #[serde(rename = "q_E")]
    pub q_eq: u32,
    #[serde(rename = "q_N")]
    pub q_north: u32,
    pub n_plus: i64,
    pub n_minus: i64,
}

/// Boundary walk of P as unit lattice steps, plus the segments that get
/// glued: the sides (to the other copy) and the cut edges (to each other).
struct Boundary {
    walk: Vec<P2>,
    sides: Vec<(P2, P2)>,
    cuts: Vec<(Vec<P2>, Vec<P2>)>,
}

fn boundary(p: &SymingtonPolytope) -> Result<Boundary> {
    let mut walk = Vec::new();
    let mut sides = Vec::new();
    let mut cuts = Vec::new();
    for i in 0..18 {
        let (a, b) = (p2(p.base.vertex(i))?, p2(p.base.vertex(i + 1))?);
        match p.cuts.iter().find(|c| c.side == i && c.size.is_positive()) {
            None => {
                walk.extend(unit_steps(a, b));
                sides.push((a, b));
            }
            Some(c) => {
                let (s, t, x) = (p2(c.start)?, p2(c.end)?, p2(c.apex)?);
                for (u, v) in [(a, s), (s, x), (x, t), (t, b)] {
                    walk.extend(unit_steps(u, v));
                }
                sides.push((a, s));
                sides.push((t, b));
                let first = lattice_points(s, x);
                let second: Vec<P2> = first.iter().map(|&y| p2(c.glue(Pt::int(y.0, y.1)))).collect::<Result<_>>()?;
                if second.last() != Some(&x) || second.first() != Some(&t) {
                    return Err(Error::Degenerate("cut gluing does not match its edges".into()));
                }
                cuts.push((first, second));
            }
        }
    }
    Ok(Boundary { walk, sides, cuts })
}

/// Involution-invariant unit triangulation of B(a).
pub fn triangulate(a: &AVector) -> Result<Triangulation> {
    if let Some(i) = parity_violation(a) {
        return Err(Error::ParityViolation(i));
    }
    if !in_fundamental(a) {
        return Err(Error::NotInCone);
    }
    if !roots().norm(a)?.is_positive() {
        return Err(Error::Degenerate("norm is not positive".into()));
    }
    let poly = symington(a, Placement::VertexPreferred)?;
    let bd = boundary(&poly)?;
    let planar = triangulate_walk(bd.walk.clone())?;

    let mut slots = Slots::default();
    let mut faces = Vec::with_capacity(2 * planar.len());
    for s in 0..2u8 {
        for t in &planar {
            let ids = [slots.vertex(t[0], s), slots.vertex(t[1], s), slots.vertex(t[2], s)];
            for k in 0..3 {
                slots.edge(t[k], t[(k + 1) % 3], s);
            }
            faces.push((ids, *t, s));
        }
    }
    for &(a, b) in &bd.sides {
        let pts = lattice_points(a, b);
        slots.glue_segments(&pts, &pts, 0, 1);
    }
    for (first, second) in &bd.cuts {
        for s in 0..2 {
            slots.glue_segments(first, second, s, s);
        }
    }

    // vertex classes that carry a triangle, in order of first appearance
    let mut vclass: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::with_capacity(faces.len());
    for (ids, t, s) in &faces {
        let mut tri = [0; 3];
        for k in 0..3 {
            let root = slots.v.find(ids[k]);
            let n = vclass.len();
            let idx = *vclass.entry(root).or_insert(n);
            if idx == vertices.len() {
                let other = slots.vertex(t[k], 1 - s);
                let equatorial = slots.v.find(other) == root;
                vertices.push(Vertex {
                    position: t[k],
                    north: *s == 0,
                    equatorial,
                    charge: 0,
                    corner: false,
                    shape: None,
                });
            }
            tri[k] = idx;
        }
        triangles.push(tri);
    }

    let mut eclass: BTreeMap<usize, (usize, usize, usize, bool)> = BTreeMap::new();
    for (ids, t, s) in &faces {
        for k in 0..3 {
            let slot = slots.edge(t[k], t[(k + 1) % 3], *s);
            let root = slots.e.find(slot);
            let entry = eclass.entry(root).or_insert_with(|| {
                let other = slots.edge(t[k], t[(k + 1) % 3], 1 - s);
                (ids[k], ids[(k + 1) % 3], 0, slots.e.find(other) == root)
            });
            entry.2 += 1;
        }
    }
    let mut edges = Vec::with_capacity(eclass.len());
    for (_, (u, w, count, eq)) in eclass {
        if count != 2 {
            return Err(Error::Degenerate(format!("an edge class meets {count} triangles")));
        }
        let (u, w) = (vclass[&slots.v.find(u)], vclass[&slots.v.find(w)]);
        edges.push((u, w, eq));
    }

    // charges: the 24 singular points of the same presentation
    let sphere = double(&poly);
    let clusters = predicted_clusters(a)?;
    let mut q_e = 0;
    let mut q_n = 0;
    for (i, pt) in sphere.points.iter().enumerate() {
        let pos = p2(pt.position)?;
        let copy = if pt.sheet == Sheet::South { 1 } else { 0 };
        let slot = *slots
            .vid
            .get(&(pos, copy))
            .ok_or_else(|| Error::Degenerate(format!("singular point {i} is not a vertex")))?;
        let idx = *vclass
            .get(&slots.v.find(slot))
            .ok_or_else(|| Error::Degenerate(format!("singular point {i} lies on no triangle")))?;
        let vtx = &mut vertices[idx];
        vtx.charge += 1;
        match pt.source {
            Source::Corner(_) => {
                q_e += 1;
                vtx.corner = true;
            }
            Source::Apex { north: true, .. } => q_n += 1,
            Source::Apex { .. } => {}
        }
        if let Some(c) = clusters.iter().find(|c| c.points.contains(&i) && c.component != 0) {
            vtx.shape = Some(c.shape.clone());
        }
    }

    Ok(Triangulation { a: *a, polytope: poly, planar, vertices, triangles, edges, q_e, q_n })
}

impl Triangulation {
    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn f(&self) -> usize {
        self.triangles.len()
    }

    pub fn v_equator(&self) -> usize {
        self.vertices.iter().filter(|v| v.equatorial).count()
    }

    pub fn e_equator(&self) -> usize {
        self.edges.iter().filter(|e| e.2).count()
    }

    pub fn euler(&self) -> i64 {
        self.v() as i64 - self.e() as i64 + self.f() as i64
    }

    pub fn total_charge(&self) -> u32 {
        self.vertices.iter().map(|v| v.charge).sum()
    }

    pub fn stats(&self) -> Stats {
        let (n_plus, n_minus) = eigenranks(self);
        Stats {
            v: self.v(),
            e: self.e(),
            f: self.f(),
            e_eq: self.e_equator(),
            v_eq: self.v_equator(),
            q_eq: self.q_e,
            q_north: self.q_n,
            n_plus,
            n_minus,
        }
    }

    pub fn to_json(&self) -> Value {
        let s = self.stats();
        json!({
            "a": self.a.0.to_vec(),
            "placement": self.polytope.placement,
            "v": s.v, "e": s.e, "f": s.f,
            "e_E": s.e_eq, "v_E": s.v_eq, "q_E": s.q_eq, "q_N": s.q_north,
            "n_plus": s.n_plus, "n_minus": s.n_minus,
            "euler": self.euler(),
            "e_minus_3v": s.e as i64 - 3 * s.v as i64,
            "dsemistable_dimension": dsemistable_dimension(self),
            "total_charge": self.total_charge(),
        })
    }
}

pub fn dsemistable_dimension(t: &Triangulation) -> i64 {
    dsemistable_from_counts(t.v(), t.e())
}

pub fn dsemistable_from_counts(v: usize, e: usize) -> i64 {
    e as i64 - 3 * v as i64 + 25
}

/// (n+, n-) from the equatorial and hemisphere counts. Charge is attributed
/// by origin: the 18 corners to the equator, apexes to their own copy.
pub fn eigenranks(t: &Triangulation) -> (i64, i64) {
    let ev = t.e() as i64 - 3 * t.v() as i64;
    let eq = t.e_equator() as i64 - t.v_equator() as i64;
    let (qe, qn) = (t.q_e as i64, t.q_n as i64);
    (ev / 2 + eq / 2 + qn + 1, ev / 2 - eq / 2 + qe + qn)
}

// ---------------------------------------------------------------------------
// contraction

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentFate {
    pub vertex: usize,
    pub position: P2,
    pub equatorial: bool,
    pub fate: Fate,
    pub shape: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionPlan {
    pub components: Vec<ComponentFate>,
    pub big: usize,
    pub nef_not_big: usize,
    pub trivial: usize,
}

impl ContractionPlan {
    /// Components not contracted to a point.
    pub fn nontrivial(&self) -> usize {
        self.big + self.nef_not_big
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap();
        v["nontrivial"] = json!(self.nontrivial());
        v
    }
}

pub fn contraction_plan(t: &Triangulation, a: &AVector) -> Result<ContractionPlan> {
    if *a != t.a {
        return Err(Error::Degenerate("triangulation belongs to a different vector".into()));
    }
    let components: Vec<ComponentFate> = t
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| ComponentFate {
            vertex: i,
            position: v.position,
            equatorial: v.equatorial,
            fate: match (v.equatorial, v.corner) {
                (false, _) => Fate::Trivial,
                (true, true) => Fate::Big,
                (true, false) => Fate::NefNotBig,
            },
            shape: v.shape.clone(),
        })
        .collect();
    let count = |f: Fate| components.iter().filter(|c| c.fate == f).count();
    Ok(ContractionPlan {
        big: count(Fate::Big),
        nef_not_big: count(Fate::NefNotBig),
        trivial: count(Fate::Trivial),
        components,
    })
}

// ---------------------------------------------------------------------------
// labels

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationLabel {
    /// labels of the pieces, cyclically from vertex 0
    pub pieces: Vec<String>,
    /// the label as read off this G
    pub raw: String,
    /// the label of the canonical representative under the symmetry group
    pub label: String,
    /// "S3", or "D9" when G lies in the outer cycle
    pub group: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
}

impl DegenerationLabel {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

fn pieces_of(rel: u32) -> Result<Vec<String>> {
    Ok(cycle_pieces(rel)?.into_iter().map(|p| p.shape.to_string()).collect())
}

/// Sum of (n_k + 1) over the cycle pieces.
pub fn piece_span(rel: u32) -> Result<usize> {
    Ok(cycle_pieces(rel)?.iter().map(|p| (p.mask & CYCLE_MASK).count_ones() as usize + 1).sum())
}

pub fn label_of_mask(g: u32) -> Result<DegenerationLabel> {
    let sym = automorphism_group();
    let rel = relevant_content(g);
    let group = if g & INTERIOR_MASK == 0 { "D9" } else { "S3" };
    if crate::diagrams::parabolic_name(g).is_some() {
        let halves = |m: u32| -> Result<Vec<String>> {
            graph().components(m).into_iter().map(|c| shape(c).map(|s| s.to_string())).collect()
        };
        let pieces = halves(rel)?;
        let canon = halves(relevant_content(sym.s3_canonical(g)))?;
        return Ok(DegenerationLabel {
            raw: pieces.join("/"),
            label: canon.join("/"),
            pieces,
            group: "S3",
            kind: "II",
        });
    }
    let pieces = pieces_of(rel)?;
    let canon = pieces_of(relevant_content(sym.canonical(g)))?;
    Ok(DegenerationLabel { raw: pieces.join(" "), label: canon.join(" "), pieces, group, kind: "III" })
}

pub fn stable_model_label(a: &AVector) -> Result<DegenerationLabel> {
    if !in_fundamental(a) || a.0.iter().all(|&x| x == 0) {
        return Err(Error::NotInCone);
    }
    label_of_mask(a.zero_mask())
}

// ---------------------------------------------------------------------------
// type II

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalComponent {
    pub position: i64,
    pub surface: String,
    pub fate: Fate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeIIModel {
    pub parabolic: String,
    pub m: i64,
    pub components: Vec<IntervalComponent>,
}

impl TypeIIModel {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

pub fn type_ii_model(a: &AVector) -> Result<TypeIIModel> {
    if !in_fundamental(a) || a.0.iter().all(|&x| x == 0) {
        return Err(Error::NotInCone);
    }
    if !roots().norm(a)?.is_zero() {
        return Err(Error::Degenerate("norm is not zero".into()));
    }
    let iv = ias::interval(a)?;
    let m = iv.multiple.ok_or(Error::NotInImage)?;
    let name = iv.parabolic.clone();
    let even = matches!(name.as_str(), "~A17" | "~E8^2~A1");
    if even && m % 2 != 0 {
        return Err(Error::OddMultiple(m, name));
    }
    let ruled = "ruled surface over E";
    let (ends, middle): ([&str; 2], Option<&str>) = match name.as_str() {
        "~A17" => (["P2 with a cubic", "P2 with a cubic"], Some("~A17 pair, poles resolved")),
        "~E8^2~A1" => {
            (["~E8- pair, invariant pair of points blown up", "~E8- pair"], Some("ruled surface of the irrelevant ~A1"))
        }
        "~D10~E7" => (["~D10 pair", "~E7 pair"], None),
        _ => (["~D16 pair", "~A1* pair"], None),
    };
    let components = (0..=m)
        .map(|l| {
            let (surface, fate) = if l == 0 || l == m {
                let s = if l == 0 { ends[0] } else { ends[1] };
                (s, if name == "~A17" { Fate::NefNotBig } else { Fate::Big })
            } else if middle.is_some() && 2 * l == m {
                (middle.unwrap(), if name == "~A17" { Fate::Big } else { Fate::NefNotBig })
            } else {
                (ruled, Fate::NefNotBig)
            };
            IntervalComponent { position: l, surface: surface.to_string(), fate }
        })
        .collect();
    Ok(TypeIIModel { parabolic: name, m, components })
}

/// The combinatorial stable-model summary for any nonzero chamber vector.
pub fn summary(a: &AVector) -> Result<Value> {
    let label = stable_model_label(a)?;
    if roots().norm(a)?.is_zero() {
        return Ok(json!({"label": label.to_json(), "type_ii": type_ii_model(a)?.to_json()}));
    }
    let t = triangulate(a)?;
    let plan = contraction_plan(&t, a)?;
    Ok(json!({
        "label": label.to_json(),
        "triangulation": t.to_json(),
        "contraction": plan.to_json(),
        "zero_set": mask_to_vec(a.zero_mask()),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_examples() {
        assert!(parity_check(&AVector([2; NR])));
        let mut a = [2; NR];
        a[1] = 1;
        assert!(!parity_check(&AVector(a)));
        assert_eq!(parity_violation(&AVector(a)), Some(1));
    }

    #[test]
    fn tetrahedron_dimension() {
        assert_eq!(dsemistable_from_counts(4, 6), 19);
    }

    #[test]
    fn empty_set_label() {
        let l = label_of_mask(0).unwrap();
        assert_eq!(l.raw, ["A0- vA0"; 9].join(" "));
        assert_eq!(l.group, "D9");
    }
}
