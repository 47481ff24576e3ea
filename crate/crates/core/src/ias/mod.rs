//! Integral-affine spheres B(a): the toric fan, the moment polygon, the three
//! Symington cuts, and the doubled sphere with its singular points.
//!
//! Everything is planar. B is the polygon P (the moment polygon with three
//! triangles removed) plus the edge gluings of each cut, doubled along the
//! boundary.

pub mod svg;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chamber::{in_fundamental, NVector};
use crate::diagrams::{self, automorphism_group, bits, cycle_pieces, graph, relevant_content, shape};
use crate::error::{Error, Result};
use crate::lattice::{self, mask_to_vec, rat_json, roots, AVector, CORNERS, NR};
use crate::sl2::{conjugacy_class, table_profile, SingularityData, SL2};

pub type Q = Rational64;

pub const SELF_INTERSECTIONS: [i64; 6] = [3, 1, 4, 1, 4, 1];
/// The side parallel to each cut side.
pub const OPPOSITE_SIDES: [usize; 3] = [9, 15, 3];
/// R² of the equatorial divisor, from the visible-surface count.
pub const EQUATOR_SELF_INTERSECTION: i64 = 18;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

// ---------------------------------------------------------------------------
// plane points

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub const fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Pt { x: q(x), y: q(y) }
    }

    pub fn origin() -> Self {
        Pt::int(0, 0)
    }

    pub fn dir(v: (i64, i64)) -> Self {
        Pt::int(v.0, v.1)
    }

    pub fn det(self, o: Pt) -> Q {
        self.x * o.y - self.y * o.x
    }

    /// Pairing with an integral covector.
    pub fn dot(self, v: (i64, i64)) -> Q {
        self.x * v.0 + self.y * v.1
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn to_json(&self) -> Value {
        json!([rat_json(&self.x), rat_json(&self.y)])
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(0.0), self.y.to_f64().unwrap_or(0.0))
    }
}

impl Add for Pt {
    type Output = Pt;
    fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Pt {
    type Output = Pt;
    fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Pt {
    type Output = Pt;
    fn neg(self) -> Pt {
        Pt::new(-self.x, -self.y)
    }
}

impl Mul<Q> for Pt {
    type Output = Pt;
    fn mul(self, k: Q) -> Pt {
        Pt::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn apply(m: &SL2, p: Pt) -> Pt {
    Pt::new(p.x * m.a + p.y * m.b, p.x * m.c + p.y * m.d)
}

/// Is `x` on the closed segment [p, r]?
fn on_segment(x: Pt, p: Pt, r: Pt) -> bool {
    if (r - p).det(x - p) != Q::zero() {
        return false;
    }
    let t = (x - p).x * (r - p).x + (x - p).y * (r - p).y;
    let len = (r - p).x * (r - p).x + (r - p).y * (r - p).y;
    t >= Q::zero() && t <= len
}

/// Do two triangles share an interior point? Separating-axis test on the
/// six edge lines; touching along an edge or vertex does not count.
pub fn interiors_overlap(t1: &[Pt; 3], t2: &[Pt; 3]) -> bool {
    let area = |t: &[Pt; 3]| (t[1] - t[0]).det(t[2] - t[0]);
    if area(t1).is_zero() || area(t2).is_zero() {
        return false;
    }
    for (a, b) in [(t1, t2), (t2, t1)] {
        for i in 0..3 {
            let p = a[i];
            let r = a[(i + 1) % 3];
            let inside = (r - p).det(a[(i + 2) % 3] - p).signum();
            if b.iter().all(|&x| (r - p).det(x - p) * inside <= Q::zero()) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// fan

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricFan18 {
    pub rays: [(i64, i64); 18],
    pub d: [i64; 18],
}

impl ToricFan18 {
    /// Inward normal of side i.
    pub fn normal(&self, i: usize) -> (i64, i64) {
        self.rays[i % 18]
    }

    /// Direction of side i: the normal turned clockwise.
    pub fn direction(&self, i: usize) -> (i64, i64) {
        let (x, y) = self.rays[i % 18];
        (y, -x)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rays": self.rays.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "d": self.d.to_vec(),
        })
    }
}

pub fn build_fan() -> Result<ToricFan18> {
    build_fan_with(&std::array::from_fn(|i| SELF_INTERSECTIONS[i % 6]))
}

/// Run v_{i+1} = d_i v_i - v_{i-1} from v0 = (1,0), v1 = (0,1).
pub fn build_fan_with(d: &[i64; 18]) -> Result<ToricFan18> {
    let step = |d: i64, prev: (i64, i64), cur: (i64, i64)| (d * cur.0 - prev.0, d * cur.1 - prev.1);
    let mut rays = [(0, 0); 18];
    rays[0] = (1, 0);
    rays[1] = (0, 1);
    for i in 1..17 {
        rays[i + 1] = step(d[i], rays[i - 1], rays[i]);
    }
    if step(d[17], rays[16], rays[17]) != rays[0] || step(d[0], rays[17], rays[0]) != rays[1] {
        return Err(Error::ClosureFailure);
    }
    for i in 0..18 {
        let (u, v) = (rays[i], rays[(i + 1) % 18]);
        if u.0 * v.1 - u.1 * v.0 != 1 {
            return Err(Error::ClosureFailure);
        }
    }
    Ok(ToricFan18 { rays, d: *d })
}

pub fn fan() -> &'static ToricFan18 {
    static F: OnceLock<ToricFan18> = OnceLock::new();
    F.get_or_init(|| build_fan().expect("the (3,1,4,1,4,1) fan closes"))
}

// ---------------------------------------------------------------------------
// polygons

/// Counterclockwise polygon with side i of lattice length `lengths[i]` and
/// inward normal v_i, starting at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub lengths: [Q; 18],
    pub vertices: [Pt; 18],
}

pub fn moment_polytope(bbar: &[Q; 18]) -> Result<Polygon> {
    if let Some(i) = bbar.iter().position(|x| x.is_negative()) {
        return Err(Error::Degenerate(format!("side {i} has negative length")));
    }
    let f = fan();
    let mut p = Pt::origin();
    let mut vertices = [p; 18];
    for i in 0..18 {
        vertices[i] = p;
        p = p + Pt::dir(f.direction(i)) * bbar[i];
    }
    if p != Pt::origin() {
        return Err(Error::NotClosed);
    }
    Ok(Polygon { lengths: *bbar, vertices })
}

impl Polygon {
    pub fn vertex(&self, i: usize) -> Pt {
        self.vertices[i % 18]
    }

    /// Normalized lattice area: twice the Euclidean one.
    pub fn area2(&self) -> Q {
        (0..18).map(|i| self.vertex(i).det(self.vertex(i + 1))).sum()
    }

    /// Lattice distance of x from the line of side i, positive inside.
    pub fn level(&self, i: usize, x: Pt) -> Q {
        (x - self.vertex(i)).dot(fan().normal(i))
    }

    pub fn contains(&self, x: Pt) -> bool {
        (0..18).all(|i| !self.level(i, x).is_negative())
    }

    pub fn on_boundary(&self, x: Pt) -> bool {
        self.contains(x) && (0..18).any(|i| self.level(i, x).is_zero())
    }

    /// Lattice distance from side s to the parallel side t, or None if the
    /// two are not antiparallel.
    pub fn width(&self, s: usize, t: usize) -> Option<Q> {
        let (u, v) = (fan().normal(s), fan().normal(t));
        (u.0 == -v.0 && u.1 == -v.1).then(|| self.level(s, self.vertex(t)))
    }

    pub fn distinct_vertices(&self) -> Vec<Pt> {
        let mut out: Vec<Pt> = Vec::new();
        for &p in &self.vertices {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lengths": self.lengths.iter().map(rat_json).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(Pt::to_json).collect::<Vec<_>>(),
            "area2": rat_json(&self.area2()),
        })
    }
}

// ---------------------------------------------------------------------------
// cuts

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    #[default]
    Symmetric,
    VertexPreferred,
}

/// One almost toric blowup: a triangle on side `side` with base
/// [start, end] of lattice length `size` and apex at height `size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cut {
    pub index: usize,
    pub side: usize,
    pub size: Q,
    /// distance of `start` from the first vertex of the side
    pub offset: Q,
    /// shift of the apex along the side direction
    pub slide: Q,
    pub start: Pt,
    pub end: Pt,
    pub apex: Pt,
}

impl Cut {
    fn new(poly: &Polygon, index: usize, size: Q, offset: Q, slide: Q) -> Cut {
        let f = fan();
        let side = CORNERS[index];
        let w = Pt::dir(f.direction(side));
        let up = Pt::dir(f.direction(side + 1)) - w;
        let start = poly.vertex(side) + w * offset;
        Cut { index, side, size, offset, slide, start, end: start + w * size, apex: start + up * size + w * slide }
    }

    pub fn triangle(&self) -> [Pt; 3] {
        [self.start, self.end, self.apex]
    }

    pub fn opposite_side(&self) -> usize {
        OPPOSITE_SIDES[self.index]
    }

    /// Monodromy of the apex singularity: the shear fixing the side direction.
    /// x -> x - det(w, x) w for the side direction w.
    pub fn monodromy(&self) -> SL2 {
        let (x, y) = fan().direction(self.side);
        SL2 { a: 1 + x * y, b: -x * x, c: y * y, d: 1 - x * y }
    }

    /// The gluing: the edge start-apex is carried onto the edge end-apex.
    pub fn glue(&self, x: Pt) -> Pt {
        self.end + apply(&self.monodromy(), x - self.start)
    }

    pub fn unglue(&self, x: Pt) -> Pt {
        self.start + apply(&self.monodromy().inverse(), x - self.end)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side,
            "size": rat_json(&self.size),
            "offset": rat_json(&self.offset),
            "slide": rat_json(&self.slide),
            "start": self.start.to_json(),
            "end": self.end.to_json(),
            "apex": self.apex.to_json(),
        })
    }
}

fn cut_fits(poly: &Polygon, c: &Cut) -> bool {
    c.size.is_zero() || c.triangle().iter().all(|&x| poly.contains(x))
}

fn cuts_fit(poly: &Polygon, cuts: &[Cut]) -> bool {
    cuts.iter().all(|c| cut_fits(poly, c))
        && (0..cuts.len())
            .all(|i| (i + 1..cuts.len()).all(|j| !interiors_overlap(&cuts[i].triangle(), &cuts[j].triangle())))
}

const MAX_SLIDE: i64 = 12;

/// Integral placements of one cut inside the polygon, nearest the first
/// vertex of the side first.
fn vertex_candidates(poly: &Polygon, k: usize, size: Q) -> Vec<Cut> {
    let side = CORNERS[k];
    let room = poly.lengths[side] - size;
    if size.is_zero() {
        let o = (poly.lengths[side] / 2).floor();
        return vec![Cut::new(poly, k, size, o, Q::zero())];
    }
    let mut out = Vec::new();
    let omax = room.floor().to_integer();
    let mut keys: Vec<(i64, i64, i64)> = Vec::new();
    for t in -MAX_SLIDE..=MAX_SLIDE {
        for o in 0..=omax {
            keys.push((t.abs(), o, t));
        }
    }
    keys.sort();
    for (_, o, t) in keys {
        let c = Cut::new(poly, k, size, q(o), q(t));
        if cut_fits(poly, &c) {
            out.push(c);
        }
    }
    out
}

fn search(cands: &[Vec<Cut>], chosen: &mut Vec<Cut>) -> bool {
    let k = chosen.len();
    if k == cands.len() {
        return true;
    }
    for c in &cands[k] {
        if chosen.iter().all(|d| !interiors_overlap(&d.triangle(), &c.triangle())) {
            chosen.push(*c);
            if search(cands, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymingtonPolytope {
    pub a: AVector,
    pub b: [Q; NR],
    pub base: Polygon,
    pub cuts: [Cut; 3],
    pub placement: Placement,
}

/// Positive-norm chamber vector to its Symington polytope.
pub fn symington(a: &AVector, placement: Placement) -> Result<SymingtonPolytope> {
    if !in_fundamental(a) {
        return Err(Error::NotInCone);
    }
    let norm = roots().norm(a)?;
    if norm.is_zero() {
        return Err(Error::ZeroVolume);
    }
    if norm.is_negative() {
        return Err(Error::NotInCone);
    }
    let b = a.b();
    let base = moment_polytope(&a.bbar())?;
    let sizes = [b[18], b[19], b[20]];
    let cuts = match placement {
        Placement::Symmetric => {
            let cuts: [Cut; 3] = std::array::from_fn(|k| {
                let o = (base.lengths[CORNERS[k]] - sizes[k]) / 2;
                Cut::new(&base, k, sizes[k], o, Q::zero())
            });
            if !cuts_fit(&base, &cuts) {
                return Err(Error::TrianglesOverlap);
            }
            cuts
        }
        Placement::VertexPreferred => {
            let preferred: [Cut; 3] = std::array::from_fn(|k| {
                let o = if sizes[k].is_zero() { (base.lengths[CORNERS[k]] / 2).floor() } else { Q::zero() };
                Cut::new(&base, k, sizes[k], o, Q::zero())
            });
            if cuts_fit(&base, &preferred) {
                preferred
            } else {
                let cands: Vec<Vec<Cut>> = (0..3).map(|k| vertex_candidates(&base, k, sizes[k])).collect();
                let mut chosen = Vec::new();
                if !search(&cands, &mut chosen) {
                    return Err(Error::TrianglesOverlap);
                }
                [chosen[0], chosen[1], chosen[2]]
            }
        }
    };
    Ok(SymingtonPolytope { a: *a, b, base, cuts, placement })
}

impl SymingtonPolytope {
    /// Normalized lattice area of P.
    pub fn area2(&self) -> Q {
        self.base.area2() - self.cuts.iter().map(|c| c.size * c.size).sum::<Q>()
    }

    /// Lattice distance from the apex of cut k to the side opposite its own.
    pub fn opposite_distance(&self, k: usize) -> Q {
        let c = &self.cuts[k];
        self.base.level(c.opposite_side(), c.apex)
    }

    /// Move a point of P across cut edges until it sits on a start edge.
    pub fn canonical_point(&self, mut x: Pt) -> Pt {
        for _ in 0..6 {
            let hit = self.cuts.iter().find(|c| c.size.is_positive() && x != c.apex && on_segment(x, c.end, c.apex));
            match hit {
                Some(c) => x = c.unglue(x),
                None => break,
            }
        }
        x
    }

    pub fn to_json(&self) -> Value {
        json!({
            "placement": self.placement,
            "base": self.base.to_json(),
            "cuts": self.cuts.iter().map(Cut::to_json).collect::<Vec<_>>(),
            "area2": rat_json(&self.area2()),
        })
    }
}

// ---------------------------------------------------------------------------
// the sphere

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Equator,
    North,
    South,
}

/// Where a singular point comes from: a corner of the polygon, or the apex
/// of a cut in one of the two copies of P.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Corner(usize),
    Apex { cut: usize, north: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub source: Source,
    pub position: Pt,
    pub sheet: Sheet,
}

impl SingularPoint {
    pub fn to_json(&self) -> Value {
        let source = match self.source {
            Source::Corner(j) => json!({"corner": j}),
            Source::Apex { cut, north } => json!({"apex": cut, "copy": if north { "north" } else { "south" }}),
        };
        json!({"source": source, "position": self.position.to_json(), "sheet": self.sheet})
    }
}

/// Index of a singular point: corners 0..17, north apexes 18..20, south 21..23.
pub fn point_index(s: Source) -> usize {
    match s {
        Source::Corner(j) => j,
        Source::Apex { cut, north: true } => 18 + cut,
        Source::Apex { cut, north: false } => 21 + cut,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IASphere {
    pub polytope: SymingtonPolytope,
    /// 24 I1 points, indexed as in [`point_index`]
    pub points: Vec<SingularPoint>,
}

pub fn double(p: &SymingtonPolytope) -> IASphere {
    let mut points: Vec<SingularPoint> = (0..18)
        .map(|j| SingularPoint { source: Source::Corner(j), position: p.base.vertex(j), sheet: Sheet::Equator })
        .collect();
    for north in [true, false] {
        for c in &p.cuts {
            let sheet = if p.base.on_boundary(c.apex) {
                Sheet::Equator
            } else if north {
                Sheet::North
            } else {
                Sheet::South
            };
            points.push(SingularPoint { source: Source::Apex { cut: c.index, north }, position: c.apex, sheet });
        }
    }
    IASphere { polytope: p.clone(), points }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "3-12")]
    ThreeTwelve,
    #[serde(rename = "8-16")]
    EightSixteen,
    #[serde(rename = "2-4")]
    TwoFour,
    #[serde(rename = "equator")]
    Equator,
}

impl Direction {
    pub const ALL: [Direction; 4] =
        [Direction::ThreeTwelve, Direction::EightSixteen, Direction::TwoFour, Direction::Equator];

    pub fn null_vector(self) -> [i64; NR] {
        match self {
            Direction::ThreeTwelve => lattice::E8_1.dense(),
            Direction::EightSixteen => lattice::D10.dense(),
            Direction::TwoFour => lattice::D16.dense(),
            Direction::Equator => lattice::A17.dense(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::ThreeTwelve => "3-12",
            Direction::EightSixteen => "8-16",
            Direction::TwoFour => "2-4",
            Direction::Equator => "equator",
        }
    }
}

/// ev(n) for the null vector attached to a direction.
pub fn circumference_of(a: &AVector, dir: Direction) -> i64 {
    dir.null_vector().iter().zip(a.0).map(|(c, x)| c * x).sum()
}

impl IASphere {
    pub fn a(&self) -> &AVector {
        &self.polytope.a
    }

    pub fn volume(&self) -> Q {
        self.polytope.area2() * 2
    }

    pub fn total_charge(&self) -> usize {
        self.points.len()
    }

    pub fn circumference(&self, dir: Direction) -> i64 {
        circumference_of(self.a(), dir)
    }

    /// Twice the lattice width between antiparallel sides, where the
    /// direction is visible in this presentation.
    pub fn geometric_circumference(&self, dir: Direction) -> Option<Q> {
        let (s, t) = match dir {
            Direction::ThreeTwelve => (3, 12),
            Direction::EightSixteen => (8, 16),
            _ => return None,
        };
        self.polytope.base.width(s, t).map(|w| w * 2)
    }

    /// Identification key of a singular point on the sphere.
    pub fn key(&self, i: usize) -> (Pt, Sheet) {
        let p = &self.points[i];
        (self.polytope.canonical_point(p.position), p.sheet)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a().0.to_vec(),
            "polytope": self.polytope.to_json(),
            "points": self.points.iter().map(SingularPoint::to_json).collect::<Vec<_>>(),
            "volume": rat_json(&self.volume()),
            "total_charge": self.total_charge(),
            "circumference": Direction::ALL.iter().map(|&d| (d.name().to_string(), json!(self.circumference(d)))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Norm-zero chamber vectors: B collapses to an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub a: AVector,
    pub parabolic: String,
    pub zero_set: Vec<usize>,
    /// a = m a0 with a0 primitive in N, when a lies in N
    pub multiple: Option<i64>,
    pub in_equator: bool,
    pub description: &'static str,
}

impl Interval {
    pub fn to_json(&self) -> Value {
        json!({
            "degenerate": true,
            "a": self.a.0.to_vec(),
            "parabolic": self.parabolic,
            "zero_set": self.zero_set,
            "multiple": self.multiple,
            "in_equator": self.in_equator,
            "description": self.description,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Built {
    Sphere(IASphere),
    Interval(Interval),
}

impl Built {
    pub fn to_json(&self) -> Value {
        match self {
            Built::Sphere(s) => s.to_json(),
            Built::Interval(i) => i.to_json(),
        }
    }
}

/// Multiple of the primitive vector of N on the ray through a.
pub fn ray_multiple(a: &AVector) -> Option<i64> {
    let v = NVector::from_a(a).ok()?;
    let g = v.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    (g > 0).then_some(g)
}

pub fn interval(a: &AVector) -> Result<Interval> {
    let g = a.zero_mask();
    let name = diagrams::parabolic_name(g).ok_or_else(|| {
        Error::InconsistentCone(format!("isotropic but zero set {:?} is not maximal parabolic", mask_to_vec(g)))
    })?;
    let description = match name {
        "~A17" => "vertical interval from the north to the south pole",
        "~D10~E7" => "side 8 identified with side 16",
        "~E8^2~A1" => "side 3 identified with side 12",
        _ => "side 2 identified with side 4",
    };
    Ok(Interval {
        a: *a,
        parabolic: name.to_string(),
        zero_set: mask_to_vec(g),
        multiple: ray_multiple(a),
        in_equator: name != "~A17",
        description,
    })
}

/// B(a) for any nonzero chamber vector.
pub fn build(a: &AVector, placement: Placement) -> Result<Built> {
    if !in_fundamental(a) || a.0.iter().all(|&x| x == 0) {
        return Err(Error::NotInCone);
    }
    let norm = roots().norm(a)?;
    if norm.is_zero() {
        return interval(a).map(Built::Interval);
    }
    Ok(Built::Sphere(double(&symington(a, placement)?)))
}

/// Symmetric placement when the triangles fit, vertex-preferred otherwise.
pub fn sphere(a: &AVector) -> Result<IASphere> {
    match symington(a, Placement::Symmetric) {
        Ok(p) => Ok(double(&p)),
        Err(Error::TrianglesOverlap) => Ok(double(&symington(a, Placement::VertexPreferred)?)),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// singular locus

/// Singular points of B(a) lying over a component of G(a).
pub fn component_points(comp: u32) -> Vec<usize> {
    let mut out: Vec<usize> = (0..18).filter(|&j| comp >> j & 1 == 1 || comp >> ((j + 17) % 18) & 1 == 1).collect();
    for k in 0..3 {
        if comp >> (18 + k) & 1 == 1 || comp >> (21 + k) & 1 == 1 {
            out.push(18 + k);
            out.push(21 + k);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    /// the component of G(a); empty for a residual I1
    pub component: Vec<usize>,
    pub shape: String,
    pub relevant: bool,
    pub points: Vec<usize>,
    pub data: SingularityData,
    pub position: Pt,
    pub sheet: Sheet,
}

impl Cluster {
    pub fn charge(&self) -> u32 {
        self.data.charge()
    }

    pub fn monodromy(&self) -> SL2 {
        self.data.monodromy()
    }

    pub fn to_json(&self) -> Value {
        let m = self.monodromy();
        json!({
            "component": self.component,
            "shape": self.shape,
            "relevant": self.relevant,
            "points": self.points,
            "charge": self.charge(),
            "singularity": self.data.describe(),
            "monodromy": m.to_string(),
            "class": conjugacy_class(&m),
            "position": self.position.to_json(),
            "sheet": self.sheet,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    /// indices into the cluster list
    pub clusters: Vec<usize>,
    pub position: Pt,
    pub sheet: Sheet,
    /// which listed exception explains it, if any
    pub listed: Option<&'static str>,
}

impl Coincidence {
    pub fn to_json(&self) -> Value {
        json!({
            "clusters": self.clusters,
            "position": self.position.to_json(),
            "sheet": self.sheet,
            "listed": self.listed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLocus {
    pub placement: Placement,
    pub clusters: Vec<Cluster>,
    pub coincidences: Vec<Coincidence>,
}

impl SingularLocus {
    pub fn total_charge(&self) -> u32 {
        self.clusters.iter().map(Cluster::charge).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "placement": self.placement,
            "clusters": self.clusters.iter().map(Cluster::to_json).collect::<Vec<_>>(),
            "coincidences": self.coincidences.iter().map(Coincidence::to_json).collect::<Vec<_>>(),
            "total_charge": self.total_charge(),
        })
    }
}

/// The three coincidence patterns of the symmetric placement, up to S3.
pub fn listed_exception(a: &AVector) -> Option<&'static str> {
    let z = |i: usize| a.0[i] == 0;
    for p in &automorphism_group().s3 {
        let m = |i: usize| p.map[i];
        let zeros = |v: &[usize]| v.iter().all(|&i| z(m(i)));
        let eq = |i: usize, j: usize| a.0[m(i)] == a.0[m(j)];
        if zeros(&[0, 1, 2, 3, 4, 5, 6]) && eq(18, 19) {
            return Some("1a");
        }
        if zeros(&[0, 17, 16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6]) && eq(21, 22) {
            return Some("1b");
        }
        if zeros(&[0, 1, 2, 3, 4, 5, 6, 7, 19]) && eq(18, 8) {
            return Some("2");
        }
    }
    None
}

pub fn singular_locus(a: &AVector) -> Result<SingularLocus> {
    locus_of(&sphere(a)?)
}

/// A cluster as predicted by the components of G(a), before any geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSpec {
    pub component: u32,
    pub shape: String,
    pub relevant: bool,
    pub points: Vec<usize>,
    pub data: SingularityData,
}

pub fn predicted_clusters(a: &AVector) -> Result<Vec<ClusterSpec>> {
    let g = a.zero_mask();
    let rel = relevant_content(g);
    let mut out = Vec::new();
    let mut used = [false; NR];
    for comp in graph().components(g) {
        let label = shape(comp)?;
        let profile = table_profile(&label)?;
        let points = component_points(comp);
        if profile.singularity.charge() as usize != points.len() {
            return Err(Error::Construction(format!(
                "component {:?} ({label}) has {} points but charge {}",
                mask_to_vec(comp),
                points.len(),
                profile.singularity.charge()
            )));
        }
        for &i in &points {
            used[i] = true;
        }
        out.push(ClusterSpec {
            component: comp,
            shape: label.to_string(),
            relevant: comp & rel == comp,
            points,
            data: profile.singularity,
        });
    }
    for i in (0..NR).filter(|&i| !used[i]) {
        out.push(ClusterSpec {
            component: 0,
            shape: "I1".into(),
            relevant: true,
            points: vec![i],
            data: SingularityData::i(&[1]),
        });
    }
    Ok(out)
}

/// Clusters of B from the components of G(a), checked against the geometry.
pub fn locus_of(s: &IASphere) -> Result<SingularLocus> {
    let a = s.a();
    let mut out = Vec::new();
    for c in predicted_clusters(a)? {
        let key = s.key(c.points[0]);
        if let Some(&bad) = c.points.iter().find(|&&i| s.key(i) != key) {
            return Err(Error::Construction(format!(
                "points {} and {bad} of component {:?} do not collide",
                c.points[0],
                mask_to_vec(c.component)
            )));
        }
        out.push(Cluster {
            component: mask_to_vec(c.component),
            shape: c.shape,
            relevant: c.relevant,
            points: c.points,
            data: c.data,
            position: key.0,
            sheet: key.1,
        });
    }
    let mut by_key: BTreeMap<(Pt, Sheet), Vec<usize>> = BTreeMap::new();
    for (i, c) in out.iter().enumerate() {
        by_key.entry((c.position, c.sheet)).or_default().push(i);
    }
    let listed = listed_exception(a);
    let coincidences = by_key
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|((position, sheet), clusters)| Coincidence { clusters, position, sheet, listed })
        .collect();
    Ok(SingularLocus { placement: s.polytope.placement, clusters: out, coincidences })
}

// ---------------------------------------------------------------------------
// equator

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquatorEdge {
    pub side: usize,
    pub multiplicity: u32,
    pub length: Q,
    pub from: Pt,
    pub to: Pt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquatorDivisor {
    pub edges: Vec<EquatorEdge>,
    /// balancing at the nonsingular points where a cut splits a side
    pub balanced: bool,
    pub self_intersection: i64,
}

impl EquatorDivisor {
    pub fn to_json(&self) -> Value {
        json!({
            "edges": self.edges.iter().map(|e| json!({
                "side": e.side,
                "multiplicity": e.multiplicity,
                "length": rat_json(&e.length),
                "from": e.from.to_json(),
                "to": e.to.to_json(),
            })).collect::<Vec<_>>(),
            "balanced": self.balanced,
            "self_intersection": self.self_intersection,
        })
    }
}

pub fn equator_divisor(s: &IASphere) -> EquatorDivisor {
    let p = &s.polytope;
    let edges = (0..18)
        .filter(|&i| p.b[i].is_positive())
        .map(|i| EquatorEdge {
            side: i,
            multiplicity: if i % 2 == 0 { 2 } else { 1 },
            length: p.b[i],
            from: p.base.vertex(i),
            to: p.base.vertex(i + 1),
        })
        .collect();
    // The glued point start ~ end of a cut is nonsingular when both side
    // pieces are nonempty; the outgoing directions there are -w and
    // M^-1 w = w with equal multiplicity.
    let balanced = p.cuts.iter().all(|c| {
        let before = c.offset;
        let after = p.base.lengths[c.side] - c.offset - c.size;
        if c.size.is_zero() || before.is_zero() || after.is_zero() {
            return true;
        }
        let w = Pt::dir(fan().direction(c.side));
        let m = if c.side % 2 == 0 { 2 } else { 1 };
        let out = -w * q(m) + apply(&c.monodromy().inverse(), w) * q(m);
        out == Pt::origin()
    });
    EquatorDivisor { edges, balanced, self_intersection: EQUATOR_SELF_INTERSECTION }
}

// ---------------------------------------------------------------------------
// dual decomposition

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub label: String,
    pub vertices: Vec<usize>,
    /// original slices merged into this one
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeridianPoint {
    /// the vertex of G that moved it
    pub vertex: usize,
    /// the equator edge whose meridian carries it
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDecomposition {
    pub slices: Vec<Slice>,
    pub centers: usize,
    /// marked points left at the north and south poles
    pub poles: [usize; 2],
    pub meridians: Vec<MeridianPoint>,
    /// for norm zero, the halves the sphere is cut into
    pub halves: Option<Vec<String>>,
}

impl DualDecomposition {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

fn meridian_edge(v: usize) -> usize {
    match v {
        18..=20 => CORNERS[v - 18],
        _ => OPPOSITE_SIDES[v - 21],
    }
}

pub fn dual_decomposition(a: &AVector) -> Result<DualDecomposition> {
    if !in_fundamental(a) || a.0.iter().all(|&x| x == 0) {
        return Err(Error::NotInCone);
    }
    let g = a.zero_mask();
    let norm = roots().norm(a)?;
    let meridians: Vec<MeridianPoint> =
        bits(g & lattice::INTERIOR_MASK).map(|v| MeridianPoint { vertex: v, edge: meridian_edge(v) }).collect();
    let moved = |k: usize| (g >> (18 + k) & 1) as usize + (g >> (21 + k) & 1) as usize;
    let left = 3 - (0..3).filter(|&k| moved(k) > 0).count();
    let halves = if norm.is_zero() {
        let rel = relevant_content(g);
        let names =
            graph().components(rel).into_iter().map(|c| shape(c).map(|s| s.to_string())).collect::<Result<Vec<_>>>()?;
        Some(names)
    } else {
        None
    };
    let slices = if g & lattice::CYCLE_MASK == lattice::CYCLE_MASK {
        vec![Slice { label: "~A17".into(), vertices: (0..18).collect(), width: 18 }]
    } else {
        cycle_pieces(g)?
            .into_iter()
            .map(|p| Slice {
                label: p.shape.to_string(),
                vertices: mask_to_vec(p.mask),
                width: (p.flanks.1 + 18 - p.flanks.0 - 1) % 18 + 1,
            })
            .collect()
    };
    Ok(DualDecomposition { centers: slices.len(), slices, poles: [left, left], meridians, halves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::rho;

    #[test]
    fn fan_first_steps() {
        let f = fan();
        assert_eq!(f.rays[2], (-1, 1));
        assert_eq!(f.d.iter().sum::<i64>(), 42);
    }

    #[test]
    fn wrong_sequence_does_not_close() {
        let mut d: [i64; 18] = std::array::from_fn(|i| SELF_INTERSECTIONS[i % 6]);
        d[1] = 2;
        assert_eq!(build_fan_with(&d), Err(Error::ClosureFailure));
    }

    #[test]
    fn empty_polygon_is_a_point() {
        let p = moment_polytope(&[Q::zero(); 18]).unwrap();
        assert!(p.vertices.iter().all(|&v| v == Pt::origin()));
        assert_eq!(p.area2(), Q::zero());
    }

    #[test]
    fn unbalanced_lengths_do_not_close() {
        let mut l = [Q::zero(); 18];
        l[0] = q(1);
        assert_eq!(moment_polytope(&l), Err(Error::NotClosed));
    }

    #[test]
    fn overlap_test() {
        let t = [Pt::int(0, 0), Pt::int(2, 0), Pt::int(0, 2)];
        let u = [Pt::int(1, 1), Pt::int(3, 1), Pt::int(1, 3)];
        let v = [Pt::int(2, 0), Pt::int(0, 2), Pt::int(2, 2)];
        assert!(!interiors_overlap(&t, &u));
        assert!(!interiors_overlap(&t, &v));
        let w = [Pt::int(0, 0), Pt::int(1, 0), Pt::int(0, 1)];
        assert!(interiors_overlap(&t, &w));
    }

    #[test]
    fn glue_carries_edges() {
        let s = symington(&rho(), Placement::Symmetric).unwrap();
        for c in &s.cuts {
            assert_eq!(c.glue(c.start), c.end);
            assert_eq!(c.glue(c.apex), c.apex);
            assert_eq!(
                c.unglue(c.glue(c.start + (c.apex - c.start) * Q::new(1, 3))),
                c.start + (c.apex - c.start) * Q::new(1, 3)
            );
        }
    }
}
