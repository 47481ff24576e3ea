//! The fundamental chamber of W(N), reflection reduction, and the cones of
//! the Coxeter fan and its semifan coarsening.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::diagrams::{self, automorphism_group, census, classify, graph, named_parabolics, relevant_content, Class};
use crate::error::{Error, Result};
use crate::lattice::{mask_to_vec, roots, AVector, BASIS, NR};

/// Interior point of the chamber used for the termination certificate:
/// a_i = 2 for i < 21 and a_21 = a_22 = a_23 = 58.
pub fn rho() -> AVector {
    let mut a = [2i64; NR];
    a[21] = 58;
    a[22] = 58;
    a[23] = 58;
    AVector(a)
}

pub fn in_fundamental(a: &AVector) -> bool {
    a.0.iter().all(|&x| x >= 0)
}

/// A vector of N in the internal basis of 19 roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NVector(pub [i64; 19]);

impl NVector {
    pub fn a(&self) -> AVector {
        roots().a_of(&self.0)
    }

    /// Preimage of an integral a-vector, if it lies in N.
    pub fn from_a(a: &AVector) -> Result<NVector> {
        let c = roots().preimage(&a.to_rational())?;
        let mut out = [0i64; 19];
        for (o, x) in out.iter_mut().zip(&c) {
            if !x.is_integer() {
                return Err(Error::NotInImage);
            }
            *o = x.to_integer().to_i64().ok_or(Error::NotInImage)?;
        }
        Ok(NVector(out))
    }

    pub fn root(j: usize) -> NVector {
        NVector(roots().root_coords(j))
    }

    pub fn pair_a(&self, a: &AVector) -> i64 {
        self.0.iter().zip(BASIS).map(|(c, i)| c * a.0[i]).sum()
    }

    pub fn norm(&self) -> i64 {
        self.pair_a(&self.a())
    }

    /// s_j(v) = v + (v, r_j) r_j.
    pub fn reflect(&self, j: usize) -> NVector {
        let aj = self.a().0[j];
        let r = roots().root_coords(j);
        NVector(std::array::from_fn(|k| self.0[k] + aj * r[k]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub v: NVector,
    pub a: AVector,
    /// reflections applied, first to last
    pub word: Vec<usize>,
    /// (rho, v) before each step and after the last one
    pub certificate: Vec<i64>,
}

const MAX_STEPS: usize = 1_000_000;

/// Reflect in the most negative wall (least index on ties) until the vector
/// lies in the chamber.
pub fn reduce_to_fundamental(v: &NVector) -> Result<Reduction> {
    let rho = rho();
    let mut v = *v;
    if !v.is_zero() && (v.norm() < 0 || v.pair_a(&rho) <= 0) {
        return Err(Error::NotInCone);
    }
    let mut word = Vec::new();
    let mut cert = vec![v.pair_a(&rho)];
    loop {
        let a = v.a();
        let (j, &min) = a.0.iter().enumerate().min_by_key(|&(i, &x)| (x, i)).unwrap();
        if min >= 0 {
            return Ok(Reduction { v, a, word, certificate: cert });
        }
        if word.len() >= MAX_STEPS {
            return Err(Error::NotInCone);
        }
        v = v.reflect(j);
        word.push(j);
        cert.push(v.pair_a(&rho));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConeType {
    #[serde(rename = "III")]
    III,
    #[serde(rename = "II")]
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeDescriptor {
    pub zero_set: Vec<usize>,
    pub class: Class,
    pub relevant_zero_set: Vec<usize>,
    #[serde(rename = "type")]
    pub kind: ConeType,
    pub tor_dim: usize,
    pub slc_dim: usize,
    /// maximal parabolic name for type II
    pub parabolic: Option<String>,
}

impl ConeDescriptor {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

/// Rank of a semidefinite set: vertices minus affine components.
fn semidefinite_rank(mask: u32) -> usize {
    let g = graph();
    let affine = g.components(mask).into_iter().filter(|&c| g.component_kind(c) == diagrams::Kind::Affine).count();
    mask.count_ones() as usize - affine
}

pub fn cone_of(a: &AVector) -> Result<ConeDescriptor> {
    if !in_fundamental(a) || a.0.iter().all(|&x| x == 0) {
        return Err(Error::NotInCone);
    }
    let norm = roots().norm(a)?;
    let g = a.zero_mask();
    let sub = classify(g);
    let rel = relevant_content(g);
    if norm.is_positive() {
        if sub.class != Class::Elliptic {
            return Err(Error::InconsistentCone(format!(
                "positive norm but zero set {:?} is {}",
                mask_to_vec(g),
                sub.class
            )));
        }
        Ok(ConeDescriptor {
            zero_set: mask_to_vec(g),
            class: sub.class,
            relevant_zero_set: mask_to_vec(rel),
            kind: ConeType::III,
            tor_dim: g.count_ones() as usize,
            slc_dim: rel.count_ones() as usize,
            parabolic: None,
        })
    } else if norm.is_zero() {
        let name = diagrams::parabolic_name(g).ok_or_else(|| {
            Error::InconsistentCone(format!("isotropic but zero set {:?} is not maximal parabolic", mask_to_vec(g)))
        })?;
        Ok(ConeDescriptor {
            zero_set: mask_to_vec(g),
            class: sub.class,
            relevant_zero_set: mask_to_vec(rel),
            kind: ConeType::II,
            tor_dim: 1 + semidefinite_rank(g),
            slc_dim: 1 + semidefinite_rank(rel),
            parabolic: Some(name.to_string()),
        })
    } else {
        Err(Error::NotInCone)
    }
}

/// (G, G^rel); two chamber points lie in the same semifan cone iff their
/// relevant contents agree.
pub fn semifan_cone(a: &AVector) -> (u32, u32) {
    let g = a.zero_mask();
    (g, relevant_content(g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorCount {
    pub type_ii: usize,
    pub type_iii: usize,
    pub toroidal_rays: usize,
    /// maximal parabolics whose relevant part loses rank
    pub dropped: Vec<String>,
}

/// Boundary divisors of the stable-pair compactification.
pub fn count_boundary_divisors() -> DivisorCount {
    let sym = automorphism_group();
    let reps18 = &census().reps[18];
    let type_iii = reps18
        .iter()
        .filter(|&&m| relevant_content(m) == m)
        .map(|&m| sym.canonical(m))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let mut type_ii = 0;
    let mut dropped = Vec::new();
    for (name, m) in named_parabolics() {
        if semidefinite_rank(relevant_content(m)) == 17 {
            type_ii += 1;
        } else {
            dropped.push(name.to_string());
        }
    }
    DivisorCount { type_ii, type_iii, toroidal_rays: diagrams::maximal_parabolics().len() + reps18.len(), dropped }
}

pub fn divisor_json(d: &DivisorCount) -> Value {
    json!({
        "type_ii": d.type_ii,
        "type_iii": d.type_iii,
        "total": d.type_ii + d.type_iii,
        "toroidal_rays": d.toroidal_rays,
        "dropped": d.dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_interior_and_integral() {
        let r = rho();
        assert!(r.0.iter().all(|&x| x > 0));
        let v = NVector::from_a(&r).unwrap();
        assert_eq!(v.a(), r);
        assert_eq!(v.norm(), 798);
    }

    #[test]
    fn single_reflection_reduces() {
        let v = NVector::from_a(&rho()).unwrap();
        let w = v.reflect(5);
        let red = reduce_to_fundamental(&w).unwrap();
        assert_eq!(red.v, v);
        assert_eq!(red.word, vec![5]);
    }

    #[test]
    fn chamber_point_is_fixed() {
        let v = NVector::from_a(&rho()).unwrap();
        let red = reduce_to_fundamental(&v).unwrap();
        assert!(red.word.is_empty());
    }
}
