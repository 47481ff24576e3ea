//! Subdiagrams of the 24-vertex Coxeter diagram: classification, shape
//! names, symmetries and enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Definiteness};
use crate::lattice::{mask_to_vec, roots, vec_to_mask, RootSystem, CYCLE_MASK, INTERIOR_MASK, NR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Elliptic,
    Parabolic,
    Indefinite,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Elliptic => "elliptic",
            Class::Parabolic => "parabolic",
            Class::Indefinite => "indefinite",
        })
    }
}

/// Adjacency masks read off the Gram matrix.
#[derive(Clone, Debug)]
pub struct Graph {
    pub solid: [u32; NR],
    pub double: [u32; NR],
    pub dashed: [u32; NR],
}

impl Graph {
    pub fn new(rs: &RootSystem) -> Self {
        let mut g = Graph { solid: [0; NR], double: [0; NR], dashed: [0; NR] };
        for i in 0..NR {
            for j in 0..NR {
                match (i != j, rs.pairing(i, j)) {
                    (true, 1) => g.solid[i] |= 1 << j,
                    (true, 2) => g.double[i] |= 1 << j,
                    (true, 0) | (false, _) => {}
                    _ => g.dashed[i] |= 1 << j,
                }
            }
        }
        g
    }

    pub fn any(&self, i: usize) -> u32 {
        self.solid[i] | self.double[i] | self.dashed[i]
    }

    /// Connected components through any nonzero pairing, sorted by lowest vertex.
    pub fn components(&self, mask: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            loop {
                let mut grow = comp;
                for i in bits(comp) {
                    grow |= self.any(i) & mask;
                }
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    fn solid_deg(&self, i: usize, comp: u32) -> u32 {
        (self.solid[i] & comp).count_ones()
    }

    /// Combinatorial type of a connected vertex set: finite Dynkin,
    /// affine Dynkin, or neither.
    pub fn component_kind(&self, comp: u32) -> Kind {
        let n = comp.count_ones();
        let mut edges = 0;
        for i in bits(comp) {
            if self.dashed[i] & comp != 0 {
                return Kind::Bad;
            }
            if self.double[i] & comp != 0 {
                return if n == 2 { Kind::Affine } else { Kind::Bad };
            }
            edges += self.solid_deg(i, comp);
        }
        let edges = edges / 2;
        if edges == n {
            return if bits(comp).all(|i| self.solid_deg(i, comp) == 2) && n >= 3 { Kind::Affine } else { Kind::Bad };
        }
        if edges != n - 1 {
            return Kind::Bad;
        }
        let mut branch = Vec::new();
        for i in bits(comp) {
            match self.solid_deg(i, comp) {
                0..=2 => {}
                3 => branch.push(i),
                4 => {
                    return if n == 5 { Kind::Affine } else { Kind::Bad };
                }
                _ => return Kind::Bad,
            }
        }
        match branch.len() {
            0 => Kind::Finite,
            1 => {
                let mut arms = self.arms(branch[0], comp);
                arms.sort_unstable();
                match (arms[0], arms[1], arms[2]) {
                    (1, 1, _) | (1, 2, 2..=4) => Kind::Finite,
                    (1, 3, 3) | (1, 2, 5) | (2, 2, 2) => Kind::Affine,
                    _ => Kind::Bad,
                }
            }
            2 => {
                let short = |b: usize| bits(self.solid[b] & comp).filter(|&j| self.solid_deg(j, comp) == 1).count();
                if short(branch[0]) == 2 && short(branch[1]) == 2 {
                    Kind::Affine
                } else {
                    Kind::Bad
                }
            }
            _ => Kind::Bad,
        }
    }

    /// Lengths of the three arms at a branch vertex of a tree.
    fn arms(&self, b: usize, comp: u32) -> Vec<u32> {
        bits(self.solid[b] & comp)
            .map(|start| {
                let (mut prev, mut cur, mut len) = (b, start, 1);
                loop {
                    let next = self.solid[cur] & comp & !(1 << prev);
                    if next == 0 {
                        break len;
                    }
                    prev = cur;
                    cur = next.trailing_zeros() as usize;
                    len += 1;
                }
            })
            .collect()
    }

    /// Fast combinatorial class; agrees with the exact test (audited in tests).
    pub fn fast_class(&self, mask: u32) -> Class {
        let mut affine = false;
        for c in self.components(mask) {
            match self.component_kind(c) {
                Kind::Bad => return Class::Indefinite,
                Kind::Affine => affine = true,
                Kind::Finite => {}
            }
        }
        if affine {
            Class::Parabolic
        } else {
            Class::Elliptic
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Finite,
    Affine,
    Bad,
}

pub fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn graph() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| Graph::new(roots()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdiagram {
    pub mask: u32,
    pub class: Class,
    pub components: Vec<u32>,
    pub rank: usize,
}

impl Subdiagram {
    pub fn vertices(&self) -> Vec<usize> {
        mask_to_vec(self.mask)
    }

    pub fn to_json(&self) -> Value {
        let shapes: Vec<Value> = self
            .components
            .iter()
            .map(|&c| match shape(c) {
                Ok(s) => json!(s.to_string()),
                Err(_) => Value::Null,
            })
            .collect();
        json!({
            "vertices": self.vertices(),
            "class": self.class.to_string(),
            "rank": self.rank,
            "components": self.components.iter().map(|&c| mask_to_vec(c)).collect::<Vec<_>>(),
            "shapes": shapes,
        })
    }
}

/// Exact classification by fraction-free elimination of the restricted Gram matrix.
pub fn classify(mask: u32) -> Subdiagram {
    let verts = mask_to_vec(mask);
    let rs = roots();
    let (def, rank) = exact::psd_class(&rs.neg_restricted(&verts));
    let class = match def {
        Definiteness::PositiveDefinite => Class::Elliptic,
        Definiteness::PositiveSemidefinite => Class::Parabolic,
        Definiteness::Indefinite => Class::Indefinite,
    };
    let rank = if class == Class::Indefinite { exact::rank(&rs.restricted(&verts)) } else { rank };
    Subdiagram { mask, class, components: graph().components(mask), rank }
}

/// Drop the components lying entirely among the interior vertices 18..23.
pub fn relevant_content(mask: u32) -> u32 {
    graph().components(mask).into_iter().filter(|c| c & CYCLE_MASK != 0).fold(0, |m, c| m | c)
}

// ---------------------------------------------------------------------------
// shapes

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    AMinus,
    DownA,
    DownAMinus,
    UpA,
    UpAMinus,
    UpAPrime,
    D,
    DMinus,
    DPrime,
    E,
    EMinus,
    AffA,
    AffAStar,
    AffD,
    AffE,
    AffEMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShapeLabel {
    pub family: Family,
    pub size: usize,
    pub irrelevant: bool,
}

impl ShapeLabel {
    pub fn new(family: Family, size: usize) -> Self {
        ShapeLabel { family, size, irrelevant: false }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.family, Family::AffA | Family::AffAStar | Family::AffD | Family::AffE | Family::AffEMinus)
    }

    /// A representative vertex list in the diagram.
    pub fn pattern(&self) -> Result<Vec<usize>> {
        use Family::*;
        let n = self.size;
        let run = |a: usize, len: usize| (0..len).map(move |k| (a + k) % 18);
        let v: Vec<usize> = match (self.irrelevant, self.family) {
            (true, A) if n == 1 => vec![18],
            (true, DownAMinus) if n == 1 => vec![21],
            (true, AffA) if n == 1 => vec![20, 23],
            (true, _) => return Err(Error::UnknownShape(self.to_string())),
            (_, A | AMinus) if n <= 17 => run(1, n).collect(),
            (_, DownA | DownAMinus) if n <= 17 => run(0, n).collect(),
            (_, UpA | UpAMinus) if (2..=18).contains(&n) => std::iter::once(18).chain(run(0, n - 1)).collect(),
            (_, UpAPrime) if n == 9 => [vec![18], run(0, 7).collect(), vec![19]].concat(),
            (_, UpAPrime) if n == 15 => [vec![18], run(0, 13).collect(), vec![20]].concat(),
            (_, D | DMinus) if (4..=18).contains(&n) => [vec![18, 17], run(0, n - 2).collect()].concat(),
            (_, DPrime) if n == 10 => [vec![18, 17], run(0, 7).collect(), vec![19]].concat(),
            (_, DPrime) if n == 16 => [vec![18, 17], run(0, 13).collect(), vec![20]].concat(),
            (_, E | EMinus) if (6..=8).contains(&n) => [vec![18, 16, 17], run(0, n - 3).collect()].concat(),
            (_, AffA) if n == 17 => run(0, 18).collect(),
            (_, AffAStar) if n == 1 => vec![3, 23],
            (_, AffD) if n == 10 => crate::lattice::D10.verts.to_vec(),
            (_, AffD) if n == 16 => crate::lattice::D16.verts.to_vec(),
            (_, AffE) if n == 7 => crate::lattice::E7.verts.to_vec(),
            (_, AffEMinus) if n == 8 => crate::lattice::E8_1.verts.to_vec(),
            _ => return Err(Error::UnknownShape(self.to_string())),
        };
        Ok(v)
    }

    pub fn unicode(&self) -> String {
        use Family::*;
        let n = self.size;
        let body = match self.family {
            A => format!("A{n}"),
            AMinus => format!("A{n}⁻"),
            DownA => format!("↓A{n}"),
            DownAMinus => format!("↓A{n}⁻"),
            UpA => format!("↑A{n}"),
            UpAMinus => format!("↑A{n}⁻"),
            UpAPrime => format!("↑A{n}′"),
            D => format!("D{n}"),
            DMinus => format!("D{n}⁻"),
            DPrime => format!("D{n}′"),
            E => format!("E{n}"),
            EMinus => format!("E{n}⁻"),
            AffA => format!("Ã{n}"),
            AffAStar => format!("Ã{n}*"),
            AffD => format!("D̃{n}"),
            AffE => format!("Ẽ{n}"),
            AffEMinus => format!("Ẽ{n}⁻"),
        };
        if self.irrelevant {
            format!("{body} irr")
        } else {
            body
        }
    }
}

impl fmt::Display for ShapeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Family::*;
        let n = self.size;
        if self.irrelevant {
            f.write_str("irr:")?;
        }
        match self.family {
            A => write!(f, "A{n}"),
            AMinus => write!(f, "A{n}-"),
            DownA => write!(f, "vA{n}"),
            DownAMinus => write!(f, "vA{n}-"),
            UpA => write!(f, "^A{n}"),
            UpAMinus => write!(f, "^A{n}-"),
            UpAPrime => write!(f, "^A{n}'"),
            D => write!(f, "D{n}"),
            DMinus => write!(f, "D{n}-"),
            DPrime => write!(f, "D{n}'"),
            E => write!(f, "E{n}"),
            EMinus => write!(f, "E{n}-"),
            AffA => write!(f, "~A{n}"),
            AffAStar => write!(f, "~A{n}*"),
            AffD => write!(f, "~D{n}"),
            AffE => write!(f, "~E{n}"),
            AffEMinus => write!(f, "~E{n}-"),
        }
    }
}

impl FromStr for ShapeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Family::*;
        let bad = || Error::Parse(format!("unrecognized shape label: {s}"));
        let (irrelevant, rest) = match s.strip_prefix("irr:") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (prefix, rest) = match rest.chars().next().ok_or_else(bad)? {
            c @ ('v' | '^' | '~') => (Some(c), &rest[1..]),
            _ => (None, rest),
        };
        let letter = rest.chars().next().ok_or_else(bad)?;
        let digits: String = rest[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
        let size: usize = digits.parse().map_err(|_| bad())?;
        let suffix = &rest[1 + digits.len()..];
        let family = match (prefix, letter, suffix) {
            (None, 'A', "") => A,
            (None, 'A', "-") => AMinus,
            (Some('v'), 'A', "") => DownA,
            (Some('v'), 'A', "-") => DownAMinus,
            (Some('^'), 'A', "") => UpA,
            (Some('^'), 'A', "-") => UpAMinus,
            (Some('^'), 'A', "'") => UpAPrime,
            (None, 'D', "") => D,
            (None, 'D', "-") => DMinus,
            (None, 'D', "'") => DPrime,
            (None, 'E', "") => E,
            (None, 'E', "-") => EMinus,
            (Some('~'), 'A', "") => AffA,
            (Some('~'), 'A', "*") => AffAStar,
            (Some('~'), 'D', "") => AffD,
            (Some('~'), 'E', "") => AffE,
            (Some('~'), 'E', "-") => AffEMinus,
            _ => return Err(bad()),
        };
        Ok(ShapeLabel { family, size, irrelevant })
    }
}

const fn is_even(i: usize) -> bool {
    i.is_multiple_of(2)
}

/// The run of consecutive cycle vertices forming `cyc`, as (first, length).
fn cycle_run(cyc: u32) -> Option<(usize, usize)> {
    let n = cyc.count_ones() as usize;
    if n == 0 || n == 18 {
        return None;
    }
    let start = (0..18).find(|&i| cyc >> i & 1 == 1 && cyc >> ((i + 17) % 18) & 1 == 0)?;
    let ok = (0..n).all(|k| cyc >> ((start + k) % 18) & 1 == 1);
    ok.then_some((start, n))
}

/// Table 1 name of a connected elliptic or parabolic component.
///
/// Chains with an odd vertex before and an even vertex after are named by
/// their mirror image, so the result is invariant under the diagram symmetries.
pub fn shape(comp: u32) -> Result<ShapeLabel> {
    let mut s = shape_oriented(comp)?;
    if s.family == Family::DownA {
        s.family = Family::AMinus;
    }
    Ok(s)
}

/// Like [`shape`] but keeps the orientation of plain chains, as degeneration
/// labels need.
pub fn shape_oriented(comp: u32) -> Result<ShapeLabel> {
    use Family::*;
    let err = || Error::Unclassifiable(mask_to_vec(comp));
    let cyc = comp & CYCLE_MASK;
    let inner = comp & INTERIOR_MASK;
    let irr = |family, size| Ok(ShapeLabel { family, size, irrelevant: true });
    if cyc == 0 {
        let v = mask_to_vec(inner);
        return match v.as_slice() {
            [18] | [19] | [20] => irr(A, 1),
            [21] | [22] | [23] => irr(DownAMinus, 1),
            [18, 21] | [19, 22] | [20, 23] => irr(AffA, 1),
            _ => Err(err()),
        };
    }
    if cyc == CYCLE_MASK {
        return if inner == 0 { Ok(ShapeLabel::new(AffA, 17)) } else { Err(err()) };
    }
    if inner & 0b111 << 21 != 0 {
        let v = mask_to_vec(comp);
        return match v.as_slice() {
            [3, 23] | [9, 21] | [15, 22] => Ok(ShapeLabel::new(AffAStar, 1)),
            _ => Err(err()),
        };
    }
    let (start, m) = cycle_run(cyc).ok_or_else(err)?;
    let left = (start + 17) % 18;
    let right = (start + m) % 18;
    let mut leaves = Vec::new();
    for k in 0..3 {
        if inner >> (18 + k) & 1 == 1 {
            let corner = 6 * k;
            let pos = (corner + 18 - start) % 18;
            if pos >= m {
                return Err(err());
            }
            leaves.push(pos);
        }
    }
    let end = |p: usize| p == 0 || p == m - 1;
    let total = m + leaves.len();
    let shape = match leaves.as_slice() {
        [] => {
            let f = match (is_even(left), is_even(right)) {
                (true, true) => A,
                (true, false) => AMinus,
                (false, false) => DownAMinus,
                (false, true) => DownA,
            };
            ShapeLabel::new(f, m)
        }
        &[p] if end(p) => {
            let far = if p == 0 { right } else { left };
            ShapeLabel::new(if is_even(far) { UpA } else { UpAMinus }, total)
        }
        &[p] => {
            let (l, r) = (p, m - 1 - p);
            let (short, long, far) = if l <= r { (l, r, right) } else { (r, l, left) };
            match (short, long) {
                (1, _) => ShapeLabel::new(if is_even(far) { D } else { DMinus }, total),
                (2, 2..=4) => ShapeLabel::new(if is_even(far) { E } else { EMinus }, total),
                (3, 3) => ShapeLabel::new(AffE, total - 1),
                (2, 5) => ShapeLabel::new(AffEMinus, total - 1),
                _ => return Err(err()),
            }
        }
        &[p, q] => match (end(p), end(q)) {
            (true, true) if m > 1 => ShapeLabel::new(UpAPrime, total),
            (true, false) | (false, true) => {
                let inner_pos = if end(p) { q } else { p };
                let short = inner_pos.min(m - 1 - inner_pos);
                if short != 1 {
                    return Err(err());
                }
                ShapeLabel::new(DPrime, total)
            }
            (false, false) => {
                let ok = [p, q].iter().all(|&x| x == 1 || x == m - 2);
                if !ok || p == q {
                    return Err(err());
                }
                ShapeLabel::new(AffD, total - 1)
            }
            _ => return Err(err()),
        },
        _ => return Err(err()),
    };
    Ok(shape)
}

/// One irreducible piece of a degeneration: a chain of the outer cycle
/// between two vertices not in G, with the interior leaves attached to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub shape: ShapeLabel,
    /// component vertices (0 for the empty chains A0-, vA0)
    pub mask: u32,
    /// the cycle vertices before and after the chain
    pub flanks: (usize, usize),
}

/// Leaves that can hang off a cycle vertex inside a piece.
fn attached_leaves(chain: u32, g: u32) -> u32 {
    const LEAVES: [(usize, usize); 6] = [(0, 18), (6, 19), (12, 20), (9, 21), (15, 22), (3, 23)];
    LEAVES.iter().filter(|&&(c, l)| chain >> c & 1 == 1 && g >> l & 1 == 1).fold(0, |m, &(_, l)| m | 1 << l)
}

/// Split the outer cycle at the vertices outside G, in cyclic order starting
/// with the piece that contains vertex 0 (or begins right after it).
pub fn cycle_pieces(g: u32) -> Result<Vec<Piece>> {
    let cyc = g & CYCLE_MASK;
    if cyc == CYCLE_MASK {
        return Ok(vec![Piece { shape: shape_oriented(cyc)?, mask: cyc, flanks: (0, 0) }]);
    }
    let outside: Vec<usize> = (0..18).filter(|&i| cyc >> i & 1 == 0).collect();
    let first = if cyc & 1 == 0 { 0 } else { *outside.last().unwrap() };
    let k0 = outside.iter().position(|&i| i == first).unwrap();
    let n = outside.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let l = outside[(k0 + k) % n];
        let r = outside[(k0 + k + 1) % n];
        let len = (r + 17 - l) % 18;
        let chain = (1..=len).fold(0u32, |m, j| m | 1 << ((l + j) % 18));
        let piece = if chain == 0 {
            let family = if is_even(l) { Family::AMinus } else { Family::DownA };
            Piece { shape: ShapeLabel::new(family, 0), mask: 0, flanks: (l, r) }
        } else {
            let mask = chain | attached_leaves(chain, g);
            Piece { shape: shape_oriented(mask)?, mask, flanks: (l, r) }
        };
        out.push(piece);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// symmetries

/// A vertex permutation with byte lookup tables for fast mask images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perm {
    pub map: [usize; NR],
    tables: [[u32; 256]; 3],
}

impl Perm {
    pub fn new(map: [usize; NR]) -> Self {
        let mut tables = [[0u32; 256]; 3];
        for (t, table) in tables.iter_mut().enumerate() {
            for (byte, out) in table.iter_mut().enumerate() {
                for b in 0..8 {
                    if byte >> b & 1 == 1 {
                        *out |= 1 << map[8 * t + b];
                    }
                }
            }
        }
        Perm { map, tables }
    }

    pub fn apply(&self, mask: u32) -> u32 {
        self.tables[0][(mask & 0xff) as usize]
            | self.tables[1][(mask >> 8 & 0xff) as usize]
            | self.tables[2][(mask >> 16 & 0xff) as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryAction {
    pub s3: Vec<Perm>,
    pub d9: Vec<Perm>,
}

impl SymmetryAction {
    pub fn s3_canonical(&self, mask: u32) -> u32 {
        self.s3.iter().map(|p| p.apply(mask)).min().unwrap()
    }

    /// D9 on cycle-contained sets, S3 otherwise.
    pub fn canonical(&self, mask: u32) -> u32 {
        if mask & INTERIOR_MASK == 0 {
            self.d9.iter().map(|p| p.apply(mask)).min().unwrap()
        } else {
            self.s3_canonical(mask)
        }
    }
}

/// All Gram-preserving permutations of the 24 vertices, by backtracking.
pub fn gram_automorphisms(rs: &RootSystem) -> Vec<[usize; NR]> {
    fn go(rs: &RootSystem, img: &mut Vec<usize>, used: &mut [bool; NR], out: &mut Vec<[usize; NR]>) {
        let i = img.len();
        if i == NR {
            out.push(std::array::from_fn(|k| img[k]));
            return;
        }
        for j in 0..NR {
            if used[j] {
                continue;
            }
            let row_ok = (0..i).all(|k| rs.pairing(i, k) == rs.pairing(j, img[k]));
            let profile = |v: usize| {
                let mut p: Vec<i64> = (0..NR).map(|u| rs.pairing(v, u)).collect();
                p.sort();
                p
            };
            if row_ok && profile(i) == profile(j) {
                used[j] = true;
                img.push(j);
                go(rs, img, used, out);
                img.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(rs, &mut Vec::new(), &mut [false; NR], &mut out);
    out
}

/// Parity-preserving dihedral group on the 18-cycle, fixing 18..23.
pub fn d9_maps() -> Vec<[usize; NR]> {
    let mut out = Vec::new();
    for r in (0..18).step_by(2) {
        for flip in [false, true] {
            out.push(std::array::from_fn(|i| {
                if i >= 18 {
                    i
                } else if flip {
                    (r + 18 - i) % 18
                } else {
                    (i + r) % 18
                }
            }));
        }
    }
    out
}

pub fn automorphism_group() -> &'static SymmetryAction {
    static S: OnceLock<SymmetryAction> = OnceLock::new();
    S.get_or_init(|| {
        let mut s3: Vec<Perm> = gram_automorphisms(roots()).into_iter().map(Perm::new).collect();
        s3.sort_by_key(|p| !p.is_identity());
        SymmetryAction { s3, d9: d9_maps().into_iter().map(Perm::new).collect() }
    })
}

// ---------------------------------------------------------------------------
// enumeration

/// Results of one exhaustive pass over negative semidefinite vertex sets.
#[derive(Clone, Debug)]
pub struct Census {
    /// number of elliptic sets of each rank, index = rank
    pub all: [u64; NR + 1],
    /// canonical S3 orbit representatives of elliptic sets, by rank
    pub reps: Vec<Vec<u32>>,
    /// every parabolic vertex set
    pub parabolic: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Comps {
    masks: [u32; NR],
    affine: u32,
    len: usize,
}

impl Comps {
    fn union(&self) -> u32 {
        self.masks[..self.len].iter().fold(0, |m, c| m | c)
    }
}

struct Acc {
    all: [u64; NR + 1],
    reps: Vec<Vec<u32>>,
    parabolic: Vec<u32>,
}

impl Acc {
    fn new() -> Self {
        Acc { all: [0; NR + 1], reps: vec![Vec::new(); NR + 1], parabolic: Vec::new() }
    }
    fn merge(mut self, o: Acc) -> Acc {
        for r in 0..=NR {
            self.all[r] += o.all[r];
        }
        for (a, b) in self.reps.iter_mut().zip(o.reps) {
            a.extend(b);
        }
        self.parabolic.extend(o.parabolic);
        self
    }
}

fn extend(g: &Graph, c: &Comps, j: usize) -> Option<Comps> {
    let set = c.union();
    if g.dashed[j] & set != 0 {
        return None;
    }
    let touch = (g.solid[j] | g.double[j]) & set;
    let mut next = Comps { masks: [0; NR], affine: 0, len: 0 };
    let mut merged = 1u32 << j;
    for k in 0..c.len {
        if c.masks[k] & touch != 0 {
            merged |= c.masks[k];
        } else {
            next.masks[next.len] = c.masks[k];
            if c.affine >> k & 1 == 1 {
                next.affine |= 1 << next.len;
            }
            next.len += 1;
        }
    }
    match g.component_kind(merged) {
        Kind::Bad => None,
        kind => {
            if kind == Kind::Affine {
                next.affine |= 1 << next.len;
            }
            next.masks[next.len] = merged;
            next.len += 1;
            Some(next)
        }
    }
}

fn walk(g: &Graph, sym: &SymmetryAction, c: &Comps, top: usize, acc: &mut Acc) {
    let set = c.union();
    if c.affine == 0 {
        let r = set.count_ones() as usize;
        acc.all[r] += 1;
        if sym.s3_canonical(set) == set {
            acc.reps[r].push(set);
        }
    } else {
        acc.parabolic.push(set);
    }
    for j in top + 1..NR {
        if let Some(next) = extend(g, c, j) {
            walk(g, sym, &next, j, acc);
        }
    }
}

/// Exhaustive search over all semidefinite vertex sets (hereditary, so every
/// set is reached from its subsets by adding vertices in increasing order).
pub fn census() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(|| {
        let g = graph();
        let sym = automorphism_group();
        let empty = Comps { masks: [0; NR], affine: 0, len: 0 };
        let seeds: Vec<(usize, Comps)> = (0..NR)
            .flat_map(|i| {
                let one = extend(g, &empty, i).unwrap();
                let mut v = vec![(i, one)];
                for j in i + 1..NR {
                    if let Some(two) = extend(g, &one, j) {
                        v.push((j, two));
                    }
                }
                v
            })
            .collect();
        let acc = seeds
            .par_iter()
            .map(|(top, c)| {
                let mut acc = Acc::new();
                let set = c.union();
                if set.count_ones() == 1 {
                    // only record the singleton; its extensions are separate seeds
                    let r = 1;
                    acc.all[r] += 1;
                    if sym.s3_canonical(set) == set {
                        acc.reps[r].push(set);
                    }
                } else {
                    walk(g, sym, c, *top, &mut acc);
                }
                acc
            })
            .reduce(Acc::new, Acc::merge);
        let mut reps = acc.reps;
        reps.iter_mut().for_each(|r| r.sort_unstable());
        let mut parabolic = acc.parabolic;
        parabolic.sort_unstable();
        // the empty set is elliptic of rank 0
        let mut all = acc.all;
        all[0] = 1;
        reps[0] = vec![0];
        Census { all, reps, parabolic }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulo {
    None,
    S3,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub rank: usize,
    pub modulo: Modulo,
    pub count: u64,
    /// canonical representatives (only for modulo S3)
    pub reps: Vec<u32>,
}

pub fn enumerate_elliptic(rank: usize, modulo: Modulo) -> Enumeration {
    let c = census();
    let rank = rank.min(NR);
    match modulo {
        Modulo::None => Enumeration { rank, modulo, count: c.all[rank], reps: Vec::new() },
        Modulo::S3 => Enumeration { rank, modulo, count: c.reps[rank].len() as u64, reps: c.reps[rank].clone() },
    }
}

/// Maximal parabolic sets (by inclusion among all parabolic sets).
pub fn all_maximal_parabolics() -> Vec<u32> {
    let g = graph();
    let c = census();
    c.parabolic
        .iter()
        .copied()
        .filter(|&p| (0..NR).filter(|&v| p >> v & 1 == 0).all(|v| g.fast_class(p | 1 << v) == Class::Indefinite))
        .collect()
}

/// Maximal parabolics up to S3, as canonical masks.
pub fn maximal_parabolics() -> Vec<u32> {
    let sym = automorphism_group();
    let mut v: Vec<u32> = all_maximal_parabolics().into_iter().map(|m| sym.s3_canonical(m)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Which of the four named maximal parabolic classes a set is S3-equivalent to.
pub fn parabolic_name(mask: u32) -> Option<&'static str> {
    let sym = automorphism_group();
    let canon = sym.s3_canonical(mask);
    named_parabolics().into_iter().find(|(_, m)| sym.s3_canonical(*m) == canon).map(|(n, _)| n)
}

/// The four maximal parabolic subdiagrams as listed in the paper.
pub fn named_parabolics() -> Vec<(&'static str, u32)> {
    use crate::lattice::*;
    vec![
        ("~A17", A17.mask()),
        ("~D10~E7", D10.mask() | E7.mask()),
        ("~E8^2~A1", E8_1.mask() | E8_2.mask() | A1_IRR.mask()),
        ("~D16~A1", D16.mask() | A1_STAR.mask()),
    ]
}

/// Every connected elliptic set, from the census.
pub fn connected_elliptic() -> Vec<u32> {
    let g = graph();
    let sym = automorphism_group();
    let mut out = Vec::new();
    for reps in &census().reps {
        for &r in reps {
            if r != 0 && g.components(r).len() == 1 {
                let mut orbit: Vec<u32> = sym.s3.iter().map(|p| p.apply(r)).collect();
                orbit.sort_unstable();
                orbit.dedup();
                out.extend(orbit);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn enumeration_json(e: &Enumeration, with_reps: bool) -> Value {
    let mut v = json!({
        "rank": e.rank,
        "modulo": match e.modulo { Modulo::None => "none", Modulo::S3 => "s3" },
        "count": e.count,
    });
    if with_reps {
        v["representatives"] = json!(e.reps.iter().map(|&m| mask_to_vec(m)).collect::<Vec<_>>());
    }
    v
}

/// Counts of elliptic S3-orbits per rank 1..18.
pub fn count_table() -> BTreeMap<usize, u64> {
    (1..=18).map(|r| (r, census().reps[r].len() as u64)).collect()
}

pub fn parse_vertices(s: &str) -> Result<u32> {
    let mut v = Vec::new();
    for p in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = p.split_once("..") {
            let a: usize = a.parse().map_err(|_| Error::Parse(format!("bad range {p}")))?;
            let b: usize = b.parse().map_err(|_| Error::Parse(format!("bad range {p}")))?;
            v.extend(a..=b);
        } else {
            v.push(p.parse().map_err(|_| Error::Parse(format!("bad vertex {p}")))?);
        }
    }
    if v.iter().any(|&i| i >= NR) {
        return Err(Error::Parse("vertex index out of range 0..23".into()));
    }
    Ok(vec_to_mask(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize]) -> u32 {
        vec_to_mask(v)
    }

    #[test]
    fn table_one_examples() {
        let cases: &[(&[usize], &str)] = &[
            (&[18, 17, 0, 1, 2, 3, 4, 5, 6, 19], "D10'"),
            (&[3, 23], "~A1*"),
            (&[21], "irr:vA1-"),
            (&[18], "irr:A1"),
            (&[20, 23], "irr:~A1"),
            (&[1, 2, 3], "A3"),
            (&[1, 2], "A2-"),
            (&[0, 1, 2], "vA3-"),
            (&[18, 0, 1, 2], "^A4-"),
            (&[18, 0, 1, 2, 3, 4], "^A6-"),
            (&[18, 0, 1], "^A3"),
            (&[18, 0, 1, 2, 3, 4, 5, 6, 19], "^A9'"),
            (&[18, 17, 0, 1], "D4"),
            (&[18, 17, 0, 1, 2], "D5-"),
            (&[18, 16, 17, 0, 1, 2], "E6-"),
            (&[18, 16, 17, 0, 1, 2, 3], "E7"),
            (&[18, 16, 17, 0, 1, 2, 3, 4], "E8-"),
            (&[13, 14, 15, 16, 17, 0, 1, 2, 18], "~E8-"),
            (&[9, 10, 11, 12, 13, 14, 15, 20], "~E7"),
        ];
        for (v, want) in cases {
            assert_eq!(shape(m(v)).unwrap().to_string(), *want, "{v:?}");
        }
    }

    #[test]
    fn oriented_chain_names() {
        assert_eq!(shape_oriented(m(&[1, 2])).unwrap().to_string(), "A2-");
        assert_eq!(shape_oriented(m(&[2, 3])).unwrap().to_string(), "vA2");
        assert_eq!(shape(m(&[2, 3])).unwrap().to_string(), "A2-");
    }

    fn labels(g: u32) -> String {
        cycle_pieces(g).unwrap().iter().map(|p| p.shape.to_string()).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn pieces_of_empty_set_alternate() {
        assert_eq!(labels(0), ["A0- vA0"; 9].join(" "));
    }

    #[test]
    fn pieces_of_figure_three() {
        let g = m(&[18, 17, 0, 1, 2, 19, 6, 7, 8, 20, 10, 11, 12, 13, 14, 15]);
        assert_eq!(labels(g), "D5- vA0 A0- ^A4- E7");
    }

    #[test]
    fn pieces_of_long_chain() {
        let g = m(&[18, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16]);
        assert_eq!(labels(g), "^A18-");
    }

    #[test]
    fn label_round_trip() {
        for s in ["A3", "vA2", "^A18-", "^A9'", "D10'", "~E8-", "irr:~A1", "~A1*"] {
            assert_eq!(s.parse::<ShapeLabel>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn s3_found_by_search() {
        let sym = automorphism_group();
        assert_eq!(sym.s3.len(), 6);
        assert!(sym.s3[0].is_identity());
        assert_eq!(sym.d9.len(), 18);
    }

    #[test]
    fn fast_class_small_cases() {
        let g = graph();
        assert_eq!(g.fast_class(m(&[0])), Class::Elliptic);
        assert_eq!(g.fast_class(CYCLE_MASK), Class::Parabolic);
        assert_eq!(g.fast_class(m(&[21, 22])), Class::Indefinite);
        assert_eq!(g.fast_class(m(&[3, 23])), Class::Parabolic);
    }

    #[test]
    fn parse_ranges() {
        assert_eq!(parse_vertices("18,0..2").unwrap(), m(&[18, 0, 1, 2]));
        assert!(parse_vertices("24").is_err());
    }
}
