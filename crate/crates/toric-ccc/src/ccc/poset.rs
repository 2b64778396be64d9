//! The poset of shifted dual cones.
//!
//! An element is a pair `(sigma, chi)` of a fan cone and a character
//! `chi in M_sigma`, stored as the integer pairing values
//! `m_j = <chi, b̄_j>` on the cone's rays. Its *wedge* is
//! `{x in M_R : <x, b̄_j> >= m_j for all rays j of sigma}`; the partial
//! order is containment of wedges, and the hom space between two elements is
//! one-dimensional exactly when they are comparable.

use crate::stackyfan::{ConeId, StackyFan};
use crate::zlat::{dot, qvec_from_int, rref, simplicial_membership, QVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// An element `(sigma, chi)` of the poset, with `chi` recorded by its pairing
/// values on the cone's rays (in sorted ray-index order). The zero cone
/// carries the empty tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaElement {
    pub cone: ConeId,
    pub values: Vec<BigInt>,
}

impl GammaElement {
    pub fn new(cone: ConeId, values: Vec<BigInt>) -> Self {
        assert_eq!(cone.len(), values.len(), "one value per ray of the cone");
        GammaElement { cone, values }
    }

    pub fn from_i64(indices: &[usize], values: &[i64]) -> Self {
        Self::new(
            ConeId::new(indices.to_vec()),
            values.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    pub fn zero_cone() -> Self {
        GammaElement {
            cone: ConeId::zero(),
            values: Vec::new(),
        }
    }

    /// Translate by a lattice character `m in M`: values shift by
    /// `<m, b̄_j>`.
    pub fn translate(&self, fan: &StackyFan, m: &[BigInt]) -> GammaElement {
        let mq = qvec_from_int(m);
        let values = self
            .cone
            .indices()
            .iter()
            .zip(&self.values)
            .map(|(&j, v)| {
                let shift = dot(&mq, &qvec_from_int(fan.ray_free(j)));
                assert!(shift.is_integer());
                v + shift.to_integer()
            })
            .collect();
        GammaElement {
            cone: self.cone.clone(),
            values,
        }
    }

    /// Does the rational point `x` lie in the (closed) wedge?
    pub fn wedge_contains(&self, fan: &StackyFan, x: &[BigRational]) -> bool {
        self.cone.indices().iter().zip(&self.values).all(|(&j, m)| {
            dot(x, &qvec_from_int(fan.ray_free(j))) >= BigRational::from(m.clone())
        })
    }

    /// A rational point on the wedge's distinguished face: any solution of
    /// `<x, b̄_j> = m_j` (free coordinates set to zero). For a full cone this
    /// is the apex.
    pub fn reference_point(&self, fan: &StackyFan) -> QVec {
        let n = fan.dim();
        if self.cone.is_empty() {
            return vec![BigRational::zero(); n];
        }
        let mut aug: Vec<QVec> = self
            .cone
            .indices()
            .iter()
            .zip(&self.values)
            .map(|(&j, m)| {
                let mut row = qvec_from_int(fan.ray_free(j));
                row.push(BigRational::from(m.clone()));
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        let mut x = vec![BigRational::zero(); n];
        for (r, &pc) in pivots.iter().enumerate() {
            if pc < n {
                x[pc] = aug[r][n].clone();
            }
        }
        x
    }

    /// Restriction of the values to a face of the cone.
    pub fn restrict_to_face(&self, face: &ConeId) -> GammaElement {
        assert!(face.is_subset_of(&self.cone));
        let values = face
            .indices()
            .iter()
            .map(|j| {
                let pos = self.cone.indices().binary_search(j).expect("face ray");
                self.values[pos].clone()
            })
            .collect();
        GammaElement {
            cone: face.clone(),
            values,
        }
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({}, [{}])", self.cone, vals.join(","))
    }
}

/// The partial order: `a <= b` iff the wedge of `a` is contained in the
/// wedge of `b`. Decided exactly: every ray generator of `b`'s cone must lie
/// in `a`'s cone, and the implied lower bound `sum lambda_i m_i^(a)` must
/// dominate `m_j^(b)`.
pub fn leq(fan: &StackyFan, a: &GammaElement, b: &GammaElement) -> bool {
    let gens_a = fan.cone_generators(&a.cone);
    for (&j, m_b) in b.cone.indices().iter().zip(&b.values) {
        let bj = qvec_from_int(fan.ray_free(j));
        match simplicial_membership(&gens_a, &bj) {
            Ok(Some(lambda)) => {
                let implied: BigRational = lambda
                    .iter()
                    .zip(&a.values)
                    .map(|(l, m)| l * BigRational::from(m.clone()))
                    .sum();
                if implied < BigRational::from(m_b.clone()) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Graded hom dimensions between two poset generators: one dimension in
/// degree zero when `a <= b`, zero otherwise.
pub fn theta_ext(fan: &StackyFan, a: &GammaElement, b: &GammaElement) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    if leq(fan, a, b) {
        out.insert(0, 1);
    }
    out
}
