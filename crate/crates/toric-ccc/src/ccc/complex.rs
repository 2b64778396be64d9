//! Formal bounded complexes of poset generators with rational differentials.
//!
//! A term is a pair (cohomological degree, [`GammaElement`]); a differential
//! entry from term `p` to term `q` requires `deg q = deg p + 1` and
//! `obj_p <= obj_q` in the poset. Composition along the poset is strict with
//! coefficient one, so `d^2` entries are plain rational sums.

use super::poset::{leq, GammaElement};
use crate::stackyfan::StackyFan;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One term of a [`ThetaComplex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTerm {
    pub degree: i64,
    pub object: GammaElement,
}

/// A bounded complex of poset generators.
#[derive(Clone, Default)]
pub struct ThetaComplex {
    pub terms: Vec<ThetaTerm>,
    /// Sparse differential: `(from, to) -> coefficient`, nonzero entries only.
    pub diff: BTreeMap<(usize, usize), BigRational>,
}

/// Violations reported by [`ThetaComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexViolation {
    /// Entry between terms whose degrees do not differ by one.
    BadDegreeStep { from: usize, to: usize },
    /// Entry between incomparable objects (no morphism exists).
    NotLeq { from: usize, to: usize },
    /// `d^2` has a nonzero entry between these terms.
    SquareNotZero { from: usize, to: usize },
    /// Entry references a missing term.
    IndexOutOfRange { from: usize, to: usize },
}

impl ThetaComplex {
    pub fn single(object: GammaElement) -> Self {
        ThetaComplex {
            terms: vec![ThetaTerm { degree: 0, object }],
            diff: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Shift all degrees by `k` (the complex moves right for positive `k`).
    pub fn shift(&self, k: i64) -> ThetaComplex {
        ThetaComplex {
            terms: self
                .terms
                .iter()
                .map(|t| ThetaTerm {
                    degree: t.degree + k,
                    object: t.object.clone(),
                })
                .collect(),
            diff: self.diff.clone(),
        }
    }

    /// Degree span `(min, max)` of the terms, when nonempty.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let min = self.terms.iter().map(|t| t.degree).min()?;
        let max = self.terms.iter().map(|t| t.degree).max()?;
        Some((min, max))
    }

    /// Full structural validation.
    pub fn validate(&self, fan: &StackyFan) -> Vec<ComplexViolation> {
        let mut out = Vec::new();
        for (&(p, q), c) in &self.diff {
            if c.is_zero() {
                continue;
            }
            if p >= self.terms.len() || q >= self.terms.len() {
                out.push(ComplexViolation::IndexOutOfRange { from: p, to: q });
                continue;
            }
            if self.terms[q].degree != self.terms[p].degree + 1 {
                out.push(ComplexViolation::BadDegreeStep { from: p, to: q });
            }
            if !leq(fan, &self.terms[p].object, &self.terms[q].object) {
                out.push(ComplexViolation::NotLeq { from: p, to: q });
            }
        }
        // d^2 = 0: composition of basis morphisms has coefficient one.
        let mut square: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (&(p, q), c1) in &self.diff {
            for (&(q2, r), c2) in &self.diff {
                if q == q2 {
                    *square.entry((p, r)).or_insert_with(BigRational::zero) += c1 * c2;
                }
            }
        }
        for ((p, r), c) in square {
            if !c.is_zero() {
                out.push(ComplexViolation::SquareNotZero { from: p, to: r });
            }
        }
        out
    }

    pub fn is_valid(&self, fan: &StackyFan) -> bool {
        self.validate(fan).is_empty()
    }

    /// Gaussian elimination up to quasi-isomorphism: repeatedly contracts a
    /// differential entry between terms carrying the *same* poset object
    /// (the morphism is then an isomorphism). Keeps Ext computations small
    /// for convolution and pullback outputs.
    pub fn simplified(&self) -> ThetaComplex {
        let mut terms = self.terms.clone();
        let mut diff = self.diff.clone();
        loop {
            let Some((&(p, q), _)) = diff
                .iter()
                .find(|(&(p, q), c)| !c.is_zero() && terms[p].object == terms[q].object)
            else {
                break;
            };
            let c = diff[&(p, q)].clone();
            let inv = c.recip();
            // d'[x -> y] = d[x -> y] - d[x -> q] * c^{-1} * d[p -> y]
            let into_q: Vec<(usize, BigRational)> = diff
                .iter()
                .filter(|(&(x, t), _)| t == q && x != p)
                .map(|(&(x, _), v)| (x, v.clone()))
                .collect();
            let from_p: Vec<(usize, BigRational)> = diff
                .iter()
                .filter(|(&(s, y), _)| s == p && y != q)
                .map(|(&(_, y), v)| (y, v.clone()))
                .collect();
            for (x, a) in &into_q {
                for (y, b) in &from_p {
                    let delta = a * &inv * b;
                    let entry = diff.entry((*x, *y)).or_insert_with(BigRational::zero);
                    *entry -= delta;
                    if entry.is_zero() {
                        diff.remove(&(*x, *y));
                    }
                }
            }
            // Drop terms p and q and reindex.
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            let remap = |i: usize| -> Option<usize> {
                if i == p || i == q {
                    None
                } else {
                    Some(i - usize::from(i > lo) - usize::from(i > hi))
                }
            };
            let mut new_diff = BTreeMap::new();
            for (&(x, y), v) in &diff {
                if let (Some(nx), Some(ny)) = (remap(x), remap(y)) {
                    if !v.is_zero() {
                        new_diff.insert((nx, ny), v.clone());
                    }
                }
            }
            diff = new_diff;
            terms.remove(hi);
            terms.remove(lo);
        }
        ThetaComplex { terms, diff }
    }

    /// The set of distinct objects appearing in the complex.
    pub fn objects(&self) -> BTreeSet<&GammaElement> {
        self.terms.iter().map(|t| &t.object).collect()
    }
}

impl fmt::Debug for ThetaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ThetaComplex [")?;
        for (i, t) in self.terms.iter().enumerate() {
            writeln!(f, "  #{i} deg {}: {:?}", t.degree, t.object)?;
        }
        for (&(p, q), c) in &self.diff {
            writeln!(f, "  d[{p} -> {q}] = {c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans;
    use num_bigint::BigInt;

    #[test]
    fn single_object_is_valid() {
        let fan = fans::p1();
        let c = ThetaComplex::single(GammaElement::from_i64(&[0], &[0]));
        assert!(c.is_valid(&fan));
    }

    #[test]
    fn non_leq_entry_is_flagged() {
        let fan = fans::p1();
        let mut c = ThetaComplex {
            terms: vec![
                ThetaTerm {
                    degree: 0,
                    object: GammaElement::from_i64(&[0], &[0]),
                },
                ThetaTerm {
                    degree: 1,
                    object: GammaElement::from_i64(&[1], &[0]),
                },
            ],
            diff: BTreeMap::new(),
        };
        c.diff.insert((0, 1), BigRational::from(BigInt::from(1)));
        let violations = c.validate(&fan);
        assert!(violations
            .iter()
            .any(|v| matches!(v, ComplexViolation::NotLeq { .. })));
    }

    #[test]
    fn d_squared_violation_is_flagged() {
        let fan = fans::p1();
        // Three comparable objects stacked with non-cancelling entries.
        let o = |m: i64| GammaElement::from_i64(&[0], &[m]);
        let mut c = ThetaComplex {
            terms: vec![
                ThetaTerm { degree: 0, object: o(2) },
                ThetaTerm { degree: 1, object: o(1) },
                ThetaTerm { degree: 2, object: o(0) },
            ],
            diff: BTreeMap::new(),
        };
        c.diff.insert((0, 1), BigRational::from(BigInt::from(1)));
        c.diff.insert((1, 2), BigRational::from(BigInt::from(1)));
        let violations = c.validate(&fan);
        assert!(violations
            .iter()
            .any(|v| matches!(v, ComplexViolation::SquareNotZero { .. })));
    }

    #[test]
    fn simplify_contracts_identity_pairs() {
        let fan = fans::p1();
        let o = GammaElement::from_i64(&[0], &[0]);
        let mut c = ThetaComplex {
            terms: vec![
                ThetaTerm { degree: 0, object: o.clone() },
                ThetaTerm { degree: 1, object: o.clone() },
            ],
            diff: BTreeMap::new(),
        };
        c.diff.insert((0, 1), BigRational::from(BigInt::from(1)));
        assert!(c.is_valid(&fan));
        let s = c.simplified();
        assert!(s.terms.is_empty());
    }
}
