//! The lattice N = H + E8^2 + A1, its 24 simple roots and their Gram matrix.
//!
//! Vertices 0..17 form the outer cycle, 18, 19, 20 hang off the corners
//! 0, 6, 12, and 21, 22, 23 sit in the middle.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, rat, Definiteness, SolveError};

pub const NR: usize = 24;
pub const CORNERS: [usize; 3] = [0, 6, 12];
pub const INTERIOR_MASK: u32 = 0b1111_1100_0000_0000_0000_0000;
pub const CYCLE_MASK: u32 = (1 << 18) - 1;

/// Roots forming a Z-basis of N (the remaining five are integral combinations).
pub const BASIS: [usize; 19] = [0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 19, 20];

/// An affine subdiagram together with its null-vector labels.
#[derive(Clone, Copy, Debug)]
pub struct Affine {
    pub name: &'static str,
    pub verts: &'static [usize],
    pub coeffs: &'static [i64],
}

pub const E8_1: Affine =
    Affine { name: "~E8(1)", verts: &[13, 14, 15, 16, 17, 0, 1, 2, 18], coeffs: &[1, 2, 3, 4, 5, 6, 4, 2, 3] };
pub const E8_2: Affine =
    Affine { name: "~E8(2)", verts: &[11, 10, 9, 8, 7, 6, 5, 4, 19], coeffs: &[1, 2, 3, 4, 5, 6, 4, 2, 3] };
pub const A1_IRR: Affine = Affine { name: "~A1irr", verts: &[20, 23], coeffs: &[1, 1] };
pub const A1_STAR: Affine = Affine { name: "~A1*", verts: &[3, 23], coeffs: &[1, 1] };
pub const D10: Affine =
    Affine { name: "~D10", verts: &[18, 17, 0, 1, 2, 3, 4, 5, 6, 7, 19], coeffs: &[1, 1, 2, 2, 2, 2, 2, 2, 2, 1, 1] };
pub const E7: Affine =
    Affine { name: "~E7", verts: &[9, 10, 11, 12, 13, 14, 15, 20], coeffs: &[1, 2, 3, 4, 3, 2, 1, 2] };
pub const D16: Affine = Affine {
    name: "~D16",
    verts: &[19, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 0, 1, 18],
    coeffs: &[1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1],
};
pub const A17: Affine =
    Affine { name: "~A17", verts: &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17], coeffs: &[1; 18] };

/// Pairs of components of a maximal parabolic whose null vectors coincide.
pub const RELATIONS: [(Affine, Affine); 4] = [(D10, E7), (E8_1, E8_2), (E8_1, A1_IRR), (D16, A1_STAR)];

/// The order-3 rotation of the diagram.
pub fn rotate(i: usize) -> usize {
    match i {
        0..=17 => (i + 6) % 18,
        18 => 19,
        19 => 20,
        20 => 18,
        21 => 22,
        22 => 23,
        _ => 21,
    }
}

impl Affine {
    pub fn dense(&self) -> [i64; NR] {
        let mut v = [0; NR];
        for (&i, &c) in self.verts.iter().zip(self.coeffs) {
            v[i] += c;
        }
        v
    }
    pub fn mask(&self) -> u32 {
        self.verts.iter().fold(0, |m, &i| m | 1 << i)
    }
}

fn rotate_dense(v: &[i64; NR]) -> [i64; NR] {
    let mut w = [0; NR];
    for i in 0..NR {
        w[rotate(i)] = v[i];
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    gram: [[i64; NR]; NR],
}

struct Derived {
    /// inverse of the Gram matrix on BASIS
    qinv: Vec<Vec<BigRational>>,
    /// every root written in BASIS coordinates
    root_coords: [[i64; 19]; NR],
}

static DEFAULT: OnceLock<RootSystem> = OnceLock::new();
static DERIVED: OnceLock<Derived> = OnceLock::new();

/// The Gram matrix of Fig. 2, built once and shared.
pub fn roots() -> &'static RootSystem {
    DEFAULT.get_or_init(|| RootSystem::build().expect("gram construction"))
}

fn declared() -> [[Option<i64>; NR]; NR] {
    let mut g = [[Some(0); NR]; NR];
    for i in 18..NR {
        for j in 18..NR {
            g[i][j] = None;
        }
    }
    let mut set = |i: usize, j: usize, v: i64| {
        g[i][j] = Some(v);
        g[j][i] = Some(v);
    };
    for i in 0..NR {
        set(i, i, -2);
    }
    for i in 0..18 {
        set(i, (i + 1) % 18, 1);
    }
    for (c, k) in CORNERS.iter().zip(18..21) {
        set(*c, k, 1);
    }
    for (i, j) in [(18, 21), (19, 22), (20, 23), (3, 23), (9, 21), (15, 22)] {
        set(i, j, 2);
    }
    g
}

impl RootSystem {
    /// Solve the undeclared interior entries from the null-vector relations
    /// and their rotations.
    pub fn build() -> Result<Self> {
        let decl = declared();
        let unknowns: Vec<(usize, usize)> =
            (18..NR).flat_map(|i| (i + 1..NR).map(move |j| (i, j))).filter(|&(i, j)| decl[i][j].is_none()).collect();
        let var = |i: usize, j: usize| unknowns.iter().position(|&p| p == (i.min(j), i.max(j)));
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (x, y) in RELATIONS {
            let mut c = sub(&x.dense(), &y.dense());
            for _ in 0..3 {
                for k in 0..NR {
                    let mut row = vec![BigRational::zero(); unknowns.len()];
                    let mut constant = 0i64;
                    for i in 0..NR {
                        if c[i] == 0 {
                            continue;
                        }
                        match decl[i][k] {
                            Some(v) => constant += c[i] * v,
                            None => row[var(i, k).unwrap()] += rat(c[i]),
                        }
                    }
                    rows.push(row);
                    rhs.push(rat(-constant));
                }
                c = rotate_dense(&c);
            }
        }
        let sol = exact::solve(&rows, &rhs).map_err(|e| Error::Construction(format!("interior entries: {:?}", e)))?;
        let mut gram = [[0i64; NR]; NR];
        for i in 0..NR {
            for j in 0..NR {
                if let Some(v) = decl[i][j] {
                    gram[i][j] = v;
                }
            }
        }
        for (&(i, j), v) in unknowns.iter().zip(&sol) {
            if !v.is_integer() {
                return Err(Error::Construction(format!("entry ({i},{j}) = {v}")));
            }
            let v = v.to_integer().to_i64().unwrap();
            gram[i][j] = v;
            gram[j][i] = v;
        }
        let rs = RootSystem { gram };
        rs.validate()?;
        Ok(rs)
    }

    pub fn from_matrix(gram: [[i64; NR]; NR]) -> Self {
        RootSystem { gram }
    }

    fn validate(&self) -> Result<()> {
        for i in 0..NR {
            for j in 0..NR {
                let v = self.gram[i][j];
                if v != self.gram[j][i] || (i == j && v != -2) || (i != j && ![0, 1, 2, 6].contains(&v)) {
                    return Err(Error::Construction(format!("bad entry ({i},{j}) = {v}")));
                }
            }
        }
        for a in [A17, D10, E7, E8_1, E8_2, A1_IRR, D16, A1_STAR] {
            let (class, _) = exact::psd_class(&self.neg_restricted(a.verts));
            if class != Definiteness::PositiveSemidefinite {
                return Err(Error::Construction(format!("{} is not semidefinite", a.name)));
            }
        }
        Ok(())
    }

    pub fn gram(&self) -> &[[i64; NR]; NR] {
        &self.gram
    }

    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn restricted(&self, verts: &[usize]) -> Vec<Vec<i64>> {
        verts.iter().map(|&i| verts.iter().map(|&j| self.gram[i][j]).collect()).collect()
    }

    /// Minus the restricted Gram matrix, so that elliptic means positive definite.
    pub fn neg_restricted(&self, verts: &[usize]) -> Vec<Vec<i64>> {
        verts.iter().map(|&i| verts.iter().map(|&j| -self.gram[i][j]).collect()).collect()
    }

    pub fn full(&self) -> Vec<Vec<i64>> {
        self.gram.iter().map(|r| r.to_vec()).collect()
    }

    /// Exact rank and Smith invariant factors of the restricted Gram matrix.
    pub fn rank_and_discriminant(&self, verts: &[usize]) -> (usize, Vec<BigInt>) {
        let m = self.restricted(verts);
        (exact::rank(&m), exact::smith_invariants(&m))
    }

    /// (positive, negative, zero) eigenvalue counts of the full Gram matrix.
    pub fn signature(&self) -> (usize, usize, usize) {
        exact::inertia(&self.full())
    }

    /// Primitive positive kernel vector of a connected affine component.
    pub fn null_vector(&self, comp: &[usize]) -> Result<Vec<i64>> {
        let ker = exact::integer_kernel(&self.restricted(comp));
        if ker.len() != 1 {
            return Err(Error::NotAffine(comp.to_vec()));
        }
        let mut v: Vec<i64> = ker[0].iter().map(|x| x.to_i64().unwrap()).collect();
        if v.iter().all(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        if v.iter().any(|&x| x <= 0) {
            return Err(Error::NotAffine(comp.to_vec()));
        }
        Ok(v)
    }

    /// Primitive integer basis of the linear relations among the 24 roots.
    pub fn relation_basis(&self) -> Vec<Vec<i64>> {
        exact::integer_kernel(&self.full())
            .into_iter()
            .map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    fn in_kernel(&self, c: &[i64; NR]) -> bool {
        (0..NR).all(|k| (0..NR).map(|i| c[i] * self.gram[i][k]).sum::<i64>() == 0)
    }

    /// Relations coming from the E8^2 A1 equations and their rotations.
    pub fn e8_relations() -> Vec<[i64; NR]> {
        let mut out = Vec::new();
        for (x, y) in [(E8_1, E8_2), (E8_1, A1_IRR)] {
            let mut c = sub(&x.dense(), &y.dense());
            for _ in 0..3 {
                out.push(c);
                c = rotate_dense(&c);
            }
        }
        out
    }

    /// Checks the coincidences of null vectors, that the E8^2 A1 equations
    /// span all relations, and their single syzygy.
    pub fn verify_relations(&self) -> bool {
        let mut all = Vec::new();
        for (x, y) in RELATIONS {
            let mut c = sub(&x.dense(), &y.dense());
            for _ in 0..3 {
                if !self.in_kernel(&c) {
                    return false;
                }
                all.push(c.to_vec());
                c = rotate_dense(&c);
            }
        }
        let e8: Vec<Vec<i64>> = Self::e8_relations().iter().map(|r| r.to_vec()).collect();
        let kernel_rank = NR - exact::rank(&self.full());
        if exact::rank(&e8) != kernel_rank || kernel_rank != 5 {
            return false;
        }
        let mut joint = e8.clone();
        joint.extend(all);
        if exact::rank(&joint) != kernel_rank {
            return false;
        }
        let syz: Vec<i64> = (0..NR).map(|i| e8[0][i] + e8[1][i] + e8[2][i]).collect();
        syz.iter().all(|&x| x == 0)
    }

    fn derived(&self) -> &'static Derived {
        assert!(std::ptr::eq(self, roots()) || *self == *roots());
        DERIVED.get_or_init(|| {
            let q = exact::rat_mat(&self.restricted(&BASIS));
            let n = BASIS.len();
            let mut qinv = vec![vec![BigRational::zero(); n]; n];
            for c in 0..n {
                let mut e = vec![BigRational::zero(); n];
                e[c] = BigRational::one();
                let col = exact::solve(&q, &e).expect("basis Gram is invertible");
                for r in 0..n {
                    qinv[r][c] = col[r].clone();
                }
            }
            let mut root_coords = [[0i64; 19]; NR];
            for (j, coords) in root_coords.iter_mut().enumerate() {
                for r in 0..n {
                    let x: BigRational = (0..n).map(|c| &qinv[r][c] * rat(self.gram[BASIS[c]][j])).sum();
                    assert!(x.is_integer(), "root {j} not integral in basis");
                    coords[r] = x.to_integer().to_i64().unwrap();
                }
            }
            Derived { qinv, root_coords }
        })
    }

    /// Coordinates of root j in the internal basis.
    pub fn root_coords(&self, j: usize) -> [i64; 19] {
        self.derived().root_coords[j]
    }

    /// Preimage of an a-vector in N_Q, in basis coordinates.
    pub fn preimage(&self, a: &[BigRational; NR]) -> Result<Vec<BigRational>> {
        let d = self.derived();
        let n = BASIS.len();
        let c: Vec<BigRational> = (0..n).map(|r| (0..n).map(|k| &d.qinv[r][k] * &a[BASIS[k]]).sum()).collect();
        for i in 0..NR {
            let ai: BigRational = (0..n).map(|r| &c[r] * rat(self.gram[BASIS[r]][i])).sum();
            if ai != a[i] {
                return Err(Error::NotInImage);
            }
        }
        Ok(c)
    }

    /// a-coordinates of an N-vector given in the internal basis.
    pub fn a_of(&self, c: &[i64; 19]) -> AVector {
        let mut a = [0i64; NR];
        for (i, ai) in a.iter_mut().enumerate() {
            *ai = (0..19).map(|r| c[r] * self.gram[BASIS[r]][i]).sum();
        }
        AVector(a)
    }

    /// Self-pairing of the preimage of an a-vector.
    pub fn norm(&self, a: &AVector) -> Result<BigRational> {
        let q = a.to_rational();
        let c = self.preimage(&q)?;
        Ok(c.iter().zip(BASIS).map(|(x, i)| x * &q[i]).sum())
    }

    pub fn norm_i(&self, a: &AVector) -> Result<i64> {
        let n = self.norm(a)?;
        if !n.is_integer() {
            return Err(Error::NonIntegral);
        }
        Ok(n.to_integer().to_i64().unwrap())
    }

    /// Solve the five linear relations for the entries not given.
    pub fn complete_a(&self, partial: &BTreeMap<usize, i64>) -> Result<AVector> {
        let rels = self.relation_basis();
        let free: Vec<usize> = (0..NR).filter(|i| !partial.contains_key(i)).collect();
        let rows: Vec<Vec<BigRational>> = rels.iter().map(|r| free.iter().map(|&i| rat(r[i])).collect()).collect();
        let rhs: Vec<BigRational> =
            rels.iter().map(|r| rat(-partial.iter().map(|(&i, &v)| r[i] * v).sum::<i64>())).collect();
        let sol = if free.is_empty() {
            if rhs.iter().any(|x| !x.is_zero()) {
                return Err(Error::Inconsistent);
            }
            vec![]
        } else {
            exact::solve(&rows, &rhs).map_err(|e| match e {
                SolveError::Underdetermined => Error::Underdetermined,
                SolveError::Inconsistent => Error::Inconsistent,
            })?
        };
        let mut a = [0i64; NR];
        for (&i, &v) in partial {
            if i >= NR {
                return Err(Error::Parse(format!("vertex {i} out of range")));
            }
            a[i] = v;
        }
        for (&i, v) in free.iter().zip(&sol) {
            if !v.is_integer() {
                return Err(Error::NonIntegral);
            }
            a[i] = v.to_integer().to_i64().unwrap();
        }
        Ok(AVector(a))
    }

    /// Invariant factors (> 1) of M_G / R_G for an elliptic G.
    ///
    /// u = sum x_k r_k (k in G) lies in M iff every pairing (u, r_i) is
    /// integral, so the quotient is read off the Smith form of the 24 x |G|
    /// block of the Gram matrix.
    pub fn saturation_quotient(&self, g: &[usize]) -> Vec<i64> {
        let block: Vec<Vec<i64>> = (0..NR).map(|i| g.iter().map(|&k| self.gram[i][k]).collect()).collect();
        exact::smith_invariants(&block).iter().map(|x| x.to_i64().unwrap()).filter(|&x| x > 1).collect()
    }

    pub fn dual_lattice(&self) -> DualLattice {
        DualLattice { extra: 21 }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "size": NR,
            "gram": self.gram.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            "corners": CORNERS,
        })
    }
}

/// M = N + (1/2) r_extra.
#[derive(Clone, Copy, Debug)]
pub struct DualLattice {
    pub extra: usize,
}

impl DualLattice {
    /// Pairings of the glue vector with the 24 roots.
    pub fn glue_pairings(&self, rs: &RootSystem) -> [BigRational; NR] {
        std::array::from_fn(|i| BigRational::new(rs.pairing(self.extra, i).into(), 2.into()))
    }

    /// Order of M/N, computed as |disc N| and checked against the glue vector.
    pub fn index(&self, rs: &RootSystem) -> usize {
        let q = rs.restricted(&BASIS);
        let det: BigInt = exact::smith_invariants(&q).iter().product();
        let glue_integral = self.glue_pairings(rs).iter().all(|x| x.is_integer());
        let glue_outside: bool = rs.root_coords(self.extra).iter().any(|c| c % 2 != 0);
        if glue_integral && glue_outside {
            det.to_usize().unwrap()
        } else {
            0
        }
    }
}

fn sub(x: &[i64; NR], y: &[i64; NR]) -> [i64; NR] {
    std::array::from_fn(|i| x[i] - y[i])
}

/// A vector of N in a-coordinates: a_i = (v, r_i).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AVector(pub [i64; NR]);

impl AVector {
    pub fn zero() -> Self {
        AVector([0; NR])
    }

    pub fn to_rational(&self) -> [BigRational; NR] {
        std::array::from_fn(|i| rat(self.0[i]))
    }

    /// Toric-model lengths: a_i = b_i for even i < 18, a_i = 2 b_i otherwise.
    pub fn b(&self) -> [Rational64; NR] {
        std::array::from_fn(|i| {
            if i < 18 && i % 2 == 0 {
                Rational64::from_integer(self.0[i])
            } else {
                Rational64::new(self.0[i], 2)
            }
        })
    }

    /// Side lengths of the base polygon before the three cuts.
    pub fn bbar(&self) -> [Rational64; 18] {
        let b = self.b();
        let mut out: [Rational64; 18] = std::array::from_fn(|i| b[i]);
        for (k, &c) in CORNERS.iter().enumerate() {
            out[c] += b[18 + k];
        }
        out
    }

    pub fn zero_mask(&self) -> u32 {
        (0..NR).filter(|&i| self.0[i] == 0).fold(0, |m, i| m | 1 << i)
    }

    pub fn scale(&self, k: i64) -> Self {
        AVector(self.0.map(|x| x * k))
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        if parts.len() != NR {
            return Err(Error::Parse(format!("expected {NR} comma-separated integers, got {}", parts.len())));
        }
        let mut a = [0; NR];
        for (x, p) in a.iter_mut().zip(parts) {
            *x = p.parse().map_err(|_| Error::Parse(format!("not an integer: {p}")))?;
        }
        Ok(AVector(a))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.0.to_vec(),
            "b": self.b().iter().map(rat_json).collect::<Vec<_>>(),
            "bbar": self.bbar().iter().map(rat_json).collect::<Vec<_>>(),
        })
    }
}

pub fn rat_json(r: &Rational64) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn big_rat_json(r: &BigRational) -> Value {
    match (r.is_integer(), r.to_integer().to_i64()) {
        (true, Some(n)) => json!(n),
        _ => json!(r.to_string()),
    }
}

pub fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..NR).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn vec_to_mask(v: &[usize]) -> u32 {
    v.iter().fold(0, |m, &i| m | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_entries_solved() {
        let g = roots().gram();
        for (i, j) in [(21, 22), (22, 23), (21, 23)] {
            assert_eq!(g[i][j], 6);
        }
        for (i, j) in [(18, 19), (18, 20), (19, 20), (18, 22), (19, 23), (20, 21)] {
            assert_eq!(g[i][j], 0);
        }
        assert_eq!(g[3][23], 2);
        assert_eq!(g[18][0], 1);
    }

    #[test]
    fn rotation_is_an_automorphism() {
        let g = roots().gram();
        for i in 0..NR {
            for j in 0..NR {
                assert_eq!(g[rotate(i)][rotate(j)], g[i][j]);
            }
        }
    }

    #[test]
    fn basis_is_unimodular_up_to_discriminant() {
        let (_, f) = roots().rank_and_discriminant(&BASIS);
        let det: BigInt = f.iter().product();
        assert_eq!(det, BigInt::from(2));
    }

    #[test]
    fn b_and_bbar() {
        let mut a = [2i64; NR];
        a[21] = 58;
        a[22] = 58;
        a[23] = 58;
        let a = AVector(a);
        assert_eq!(a.b()[1], Rational64::from_integer(1));
        assert_eq!(a.b()[21], Rational64::from_integer(29));
        assert_eq!(a.bbar()[0], Rational64::from_integer(3));
        assert_eq!(a.bbar()[2], Rational64::from_integer(2));
    }

    #[test]
    fn parse_rejects_short_input() {
        assert!(AVector::parse("1,2,3").is_err());
    }
}
