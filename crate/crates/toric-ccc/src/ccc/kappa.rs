//! The constructible image of an equivariant line bundle, and convolution.
//!
//! The image of `O(uchi)` over a complete fan is the Cech-style complex with
//! one term per nonempty subset `S` of maximal cones, carrying the
//! intersection cone `C_S` and the restricted values; the differential is
//! the alternating sum of inclusion maps. The first term sits in degree
//! zero (uniform global convention; the orientation shift `[dim M_R]` is
//! suppressed, so cross-checks of absolute degrees shift by `n`).

use super::complex::{ThetaComplex, ThetaTerm};
use super::poset::GammaElement;
use crate::linebundle::{LineBundleError, TwistedPolytope};
use crate::stackyfan::{ConeId, StackyFan};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Index subsets of `{0, .., v-1}` in (size, lex) order, nonempty.
fn nonempty_subsets(v: usize) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..v).collect();
    let mut out = Vec::new();
    for size in 1..=v {
        out.extend(crate::zlat::combinations(&idx, size));
    }
    out
}

/// Standard Cech sign for inserting `j` into the sorted subset `t`:
/// `(-1)^(position of j in t)`.
fn cech_sign(t: &[usize], j: usize) -> BigRational {
    let pos = t.iter().position(|&x| x == j).expect("inserted element");
    if pos % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// The Cech image of the line bundle with twisted polytope `uchi`.
///
/// Term for the subset `S = {i_0 < ... < i_k}` (degree `k`): the object
/// `(C_S, values)` where `C_S` is the intersection of the chosen maximal
/// cones and the values restrict any chart of the subset.
pub fn cech_kappa(fan: &StackyFan, uchi: &TwistedPolytope) -> Result<ThetaComplex, LineBundleError> {
    if !fan.is_complete() {
        return Err(LineBundleError::NotComplete);
    }
    if !uchi.validate(fan).is_empty() {
        return Err(LineBundleError::ShapeMismatch);
    }
    let maxes = fan.max_cones();
    let v = maxes.len();
    let subsets = nonempty_subsets(v);
    let index_of: BTreeMap<&[usize], usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();

    let object_for = |s: &[usize]| -> GammaElement {
        let mut cone = maxes[s[0]].clone();
        for &i in &s[1..] {
            cone = cone.intersection(&maxes[i]);
        }
        let values: Vec<BigInt> = cone
            .indices()
            .iter()
            .map(|&j| uchi.value(fan, s[0], j).clone())
            .collect();
        GammaElement::new(cone, values)
    };

    let terms: Vec<ThetaTerm> = subsets
        .iter()
        .map(|s| ThetaTerm {
            degree: s.len() as i64 - 1,
            object: object_for(s),
        })
        .collect();

    let mut diff = BTreeMap::new();
    for (from, s) in subsets.iter().enumerate() {
        for j in 0..v {
            if s.contains(&j) {
                continue;
            }
            let mut t = s.clone();
            t.push(j);
            t.sort_unstable();
            let to = index_of[t.as_slice()];
            diff.insert((from, to), cech_sign(&t, j));
        }
    }
    Ok(ThetaComplex { terms, diff })
}

/// Convolution of two complexes over the same fan: the object-level rule is
/// `(sigma, phi) * (tau, psi) = (sigma meet tau, phi|+psi|)` with the values
/// summed ray-wise on the shared rays; degrees add and the differential
/// carries the Koszul sign on the second factor.
pub fn convolve(fan: &StackyFan, e: &ThetaComplex, f: &ThetaComplex) -> ThetaComplex {
    debug_assert!(e.is_valid(fan) && f.is_valid(fan));
    let pair_object = |a: &GammaElement, b: &GammaElement| -> GammaElement {
        let cone = a.cone.intersection(&b.cone);
        let values: Vec<BigInt> = cone
            .indices()
            .iter()
            .map(|&j| {
                let pa = a.cone.indices().binary_search(&j).expect("shared ray");
                let pb = b.cone.indices().binary_search(&j).expect("shared ray");
                &a.values[pa] + &b.values[pb]
            })
            .collect();
        GammaElement::new(cone, values)
    };

    let mut terms = Vec::with_capacity(e.terms.len() * f.terms.len());
    let mut index = BTreeMap::new();
    for (i, te) in e.terms.iter().enumerate() {
        for (j, tf) in f.terms.iter().enumerate() {
            index.insert((i, j), terms.len());
            terms.push(ThetaTerm {
                degree: te.degree + tf.degree,
                object: pair_object(&te.object, &tf.object),
            });
        }
    }
    let mut diff = BTreeMap::new();
    // d(e_i x f_j) = d(e_i) x f_j + (-1)^{deg e_i} e_i x d(f_j)
    for (&(p, q), c) in &e.diff {
        for j in 0..f.terms.len() {
            diff.insert((index[&(p, j)], index[&(q, j)]), c.clone());
        }
    }
    for (&(p, q), c) in &f.diff {
        for i in 0..e.terms.len() {
            let sign = if e.terms[i].degree.rem_euclid(2) == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            diff.insert((index[&(i, p)], index[&(i, q)]), sign * c);
        }
    }
    ThetaComplex { terms, diff }
}
