//! Equivariant line bundles on a toric DM stack, combinatorially: divisor
//! coefficient vectors, twisted polytopes, Q-ampleness, section weights, and
//! Taylor resolutions of monomial ideals in the Cox variables.
//!
//! A twisted polytope stores, for each maximal cone `C_i` (in the fan's
//! fixed order), the integer pairing values `m_{i,j} = <chi_i, b̄_j>` on the
//! cone's rays. The values are integers exactly because `chi_i` lies in
//! `M_{C_i}`; the apex points `chi_i` themselves may be fractional.
//!
//! Sign convention, fixed once: the bundle of the divisor `sum c_i D_i` has
//! chart values `m_{i,j} = -c_j`, so its section weights are the lattice
//! points of `{xi : <xi, b̄_j> >= -c_j}`.

use crate::stackyfan::StackyFan;
use crate::zlat::{dot, qvec_from_int, rref, QVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LineBundleError {
    #[error("divisor has {got} coefficients, fan has {want} rays")]
    DivisorLength { got: usize, want: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("maximal cone {0} is not full-dimensional")]
    NotFullDimensional(String),
    #[error("twisted polytope shape does not match the fan")]
    ShapeMismatch,
    #[error("monomial has {got} exponents, fan has {want} rays")]
    MonomialLength { got: usize, want: usize },
}

/// Integer coefficients of an equivariant divisor `sum c_i D_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DivisorCoeffs(pub Vec<BigInt>);

impl DivisorCoeffs {
    pub fn from_i64(c: &[i64]) -> Self {
        DivisorCoeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(r: usize) -> Self {
        DivisorCoeffs(vec![BigInt::zero(); r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for DivisorCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "O({})", s.join(","))
    }
}

/// A twisted polytope: one integer value tuple per maximal cone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwistedPolytope {
    /// `values[i][k]` is `m_{i, j}` for the k-th ray `j` of max cone `i`.
    values: Vec<Vec<BigInt>>,
}

impl fmt::Debug for TwistedPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistedPolytope{:?}", self.values)
    }
}

/// One compatibility violation between charts of a twisted polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistViolation {
    pub ray: usize,
    pub first_cone: usize,
    pub second_cone: usize,
}

impl TwistedPolytope {
    /// Raw constructor; use [`from_divisor`] for bundles of divisors.
    pub fn new(fan: &StackyFan, values: Vec<Vec<BigInt>>) -> Result<Self, LineBundleError> {
        if values.len() != fan.max_cones().len()
            || values
                .iter()
                .zip(fan.max_cones())
                .any(|(v, c)| v.len() != c.len())
        {
            return Err(LineBundleError::ShapeMismatch);
        }
        Ok(TwistedPolytope { values })
    }

    pub fn values(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    /// The value `m_{i,j}` for maximal cone index `i` and ray index `j`
    /// (which must lie in that cone).
    pub fn value(&self, fan: &StackyFan, i: usize, ray: usize) -> &BigInt {
        let pos = fan.max_cones()[i]
            .indices()
            .binary_search(&ray)
            .expect("ray in cone");
        &self.values[i][pos]
    }

    /// Shared rays of different charts must carry equal values; in a
    /// simplicial fan this is exactly the agreement condition on the
    /// intersection cone.
    pub fn validate(&self, fan: &StackyFan) -> Vec<TwistViolation> {
        let mut violations = Vec::new();
        let maxes = fan.max_cones();
        for a in 0..maxes.len() {
            for b in a + 1..maxes.len() {
                for &ray in maxes[a].intersection(&maxes[b]).indices() {
                    if self.value(fan, a, ray) != self.value(fan, b, ray) {
                        violations.push(TwistViolation {
                            ray,
                            first_cone: a,
                            second_cone: b,
                        });
                    }
                }
            }
        }
        violations
    }

    /// Value-wise sum; models the tensor product of the two bundles.
    pub fn add(&self, other: &TwistedPolytope) -> TwistedPolytope {
        assert_eq!(self.values.len(), other.values.len());
        TwistedPolytope {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    /// Value-wise negation; models the dual line bundle.
    pub fn negate(&self) -> TwistedPolytope {
        TwistedPolytope {
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Value-wise integer scaling; models the n-th tensor power.
    pub fn scale(&self, n: &BigInt) -> TwistedPolytope {
        TwistedPolytope {
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| x * n).collect())
                .collect(),
        }
    }
}

/// Checks assumption that all maximal cones are full-dimensional.
fn require_top(fan: &StackyFan) -> Result<(), LineBundleError> {
    let n = fan.dim();
    for c in fan.max_cones() {
        if c.len() != n {
            return Err(LineBundleError::NotFullDimensional(format!("{}", c)));
        }
    }
    Ok(())
}

/// The twisted polytope of the equivariant line bundle `O(sum c_i D_i)`:
/// chart values `m_{i,j} = -c_j`.
pub fn from_divisor(fan: &StackyFan, c: &DivisorCoeffs) -> Result<TwistedPolytope, LineBundleError> {
    if c.len() != fan.ray_count() {
        return Err(LineBundleError::DivisorLength {
            got: c.len(),
            want: fan.ray_count(),
        });
    }
    if !fan.is_complete() {
        return Err(LineBundleError::NotComplete);
    }
    require_top(fan)?;
    Ok(TwistedPolytope {
        values: fan
            .max_cones()
            .iter()
            .map(|cone| cone.indices().iter().map(|&j| -&c.0[j]).collect())
            .collect(),
    })
}

/// The apex `chi_i` of each chart: the unique rational solution of
/// `<x, b̄_j> = m_{i,j}` over the rays of the (full-dimensional) cone.
pub fn apexes(fan: &StackyFan, twist: &TwistedPolytope) -> Result<Vec<QVec>, LineBundleError> {
    require_top(fan)?;
    let n = fan.dim();
    let mut out = Vec::new();
    for (i, cone) in fan.max_cones().iter().enumerate() {
        let mut aug: Vec<QVec> = Vec::with_capacity(n);
        for (k, &j) in cone.indices().iter().enumerate() {
            let mut row = qvec_from_int(fan.ray_free(j));
            row.push(BigRational::from(twist.values[i][k].clone()));
            aug.push(row);
        }
        let pivots = rref(&mut aug);
        assert_eq!(pivots.len(), n, "full-dimensional simplicial cone");
        let mut x = vec![BigRational::zero(); n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[r][n].clone();
        }
        out.push(x);
    }
    Ok(out)
}

/// Certificate data of a Q-ampleness decision.
#[derive(Debug, Clone)]
pub struct AmpleCertificate {
    pub ample: bool,
    /// Apex of each maximal cone.
    pub apexes: Vec<QVec>,
    /// Condition (i): the apexes are pairwise distinct.
    pub apexes_distinct: bool,
    /// Condition (i): every apex is a vertex of the half-space polytope.
    pub apexes_are_vertices: bool,
    /// Condition (ii), forward: every apex satisfies every inequality.
    pub hull_inside_halfspaces: bool,
    /// Condition (ii), reverse: every vertex of the half-space system is an
    /// apex. Vertices are enumerated from `n`-subsets of the inequalities,
    /// skipping degenerate subsets.
    pub halfspace_vertices: Vec<QVec>,
    pub vertices_are_apexes: bool,
}

/// Exact Q-ampleness test: strict convexity of the apex set plus equality of
/// the apex hull with the half-space system `<xi, b̄_j> >= m_{i,j}`.
pub fn is_q_ample(fan: &StackyFan, twist: &TwistedPolytope) -> Result<AmpleCertificate, LineBundleError> {
    if !fan.is_complete() {
        return Err(LineBundleError::NotComplete);
    }
    let n = fan.dim();
    let apex_list = apexes(fan, twist)?;

    let mut apexes_distinct = true;
    for a in 0..apex_list.len() {
        for b in a + 1..apex_list.len() {
            if apex_list[a] == apex_list[b] {
                apexes_distinct = false;
            }
        }
    }

    // Inequality system: one row per (cone, ray) pair, deduplicated by ray
    // (compatibility makes the value independent of the chart).
    let mut ineqs: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (i, cone) in fan.max_cones().iter().enumerate() {
        for (k, &j) in cone.indices().iter().enumerate() {
            ineqs.entry(j).or_insert_with(|| twist.values[i][k].clone());
        }
    }
    let rows: Vec<(QVec, BigRational)> = ineqs
        .iter()
        .map(|(&j, m)| (qvec_from_int(fan.ray_free(j)), BigRational::from(m.clone())))
        .collect();

    let satisfies_all = |x: &QVec| rows.iter().all(|(normal, m)| dot(normal, x) >= *m);
    let hull_inside_halfspaces = apex_list.iter().all(|a| satisfies_all(a));

    // Vertices of the half-space polytope from n-subsets of inequalities.
    let idx: Vec<usize> = (0..rows.len()).collect();
    let mut verts: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for subset in crate::zlat::combinations(&idx, n) {
        let mut aug: Vec<QVec> = subset
            .iter()
            .map(|&i| {
                let mut row = rows[i].0.clone();
                row.push(rows[i].1.clone());
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() != n || pivots.iter().any(|&p| p == n) {
            continue;
        }
        let mut x = vec![BigRational::zero(); n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[r][n].clone();
        }
        if satisfies_all(&x) {
            verts.insert(x);
        }
    }
    let halfspace_vertices: Vec<QVec> = verts.into_iter().collect();

    let apex_set: BTreeSet<&QVec> = apex_list.iter().collect();
    let vertices_are_apexes = halfspace_vertices.iter().all(|v| apex_set.contains(v));
    let vertex_set: BTreeSet<&QVec> = halfspace_vertices.iter().collect();
    let apexes_are_vertices = apex_list.iter().all(|a| vertex_set.contains(a));

    let ample = apexes_distinct && hull_inside_halfspaces && vertices_are_apexes && apexes_are_vertices;
    Ok(AmpleCertificate {
        ample,
        apexes: apex_list,
        apexes_distinct,
        apexes_are_vertices,
        hull_inside_halfspaces,
        halfspace_vertices,
        vertices_are_apexes,
    })
}

/// The finite set of section weights: lattice points `xi in M` with
/// `<xi, b̄_j> >= m_{i,j}` for all charts and rays. The enumeration runs
/// inside the bounding box of the apexes, which always contains the
/// half-space polytope of a complete fan.
pub fn section_weights(
    fan: &StackyFan,
    twist: &TwistedPolytope,
) -> Result<BTreeSet<Vec<BigInt>>, LineBundleError> {
    if !fan.is_complete() {
        return Err(LineBundleError::NotComplete);
    }
    let n = fan.dim();
    let apex_list = apexes(fan, twist)?;
    let mut ineqs: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (i, cone) in fan.max_cones().iter().enumerate() {
        for (k, &j) in cone.indices().iter().enumerate() {
            ineqs.entry(j).or_insert_with(|| twist.values[i][k].clone());
        }
    }
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![BigInt::from(-1); n];
    if !apex_list.is_empty() {
        for d in 0..n {
            let min = apex_list.iter().map(|a| &a[d]).min().unwrap();
            let max = apex_list.iter().map(|a| &a[d]).max().unwrap();
            lo[d] = min.ceil().to_integer();
            hi[d] = max.floor().to_integer();
        }
    }
    let mut out = BTreeSet::new();
    let mut point = lo.clone();
    'outer: loop {
        let q = qvec_from_int(&point);
        let inside = ineqs.iter().all(|(&j, m)| {
            dot(&qvec_from_int(fan.ray_free(j)), &q) >= BigRational::from(m.clone())
        });
        if inside {
            out.insert(point.clone());
        }
        // Odometer increment over the box.
        for d in 0..n {
            point[d] += 1;
            if point[d] <= hi[d] {
                continue 'outer;
            }
            point[d] = lo[d].clone();
        }
        break;
    }
    if n == 0 {
        out.insert(Vec::new());
    }
    Ok(out)
}

/// Number of exponent tuples `e >= 0` with `sum e_i w_i = degree`;
/// zero for negative degrees.
pub fn count_weighted_monomials(weights: &[BigInt], degree: &BigInt) -> BigInt {
    if degree.is_negative() {
        return BigInt::zero();
    }
    fn rec(weights: &[BigInt], degree: &BigInt) -> BigInt {
        if weights.is_empty() {
            return if degree.is_zero() { BigInt::one() } else { BigInt::zero() };
        }
        let w = &weights[0];
        assert!(w.is_positive(), "weights must be positive");
        let mut total = BigInt::zero();
        let mut rem = degree.clone();
        while !rem.is_negative() {
            total += rec(&weights[1..], &rem);
            rem -= w;
        }
        total
    }
    rec(weights, degree)
}

pub fn count_weighted_monomials_u64(weights: &[u64], degree: i64) -> BigInt {
    let w: Vec<BigInt> = weights.iter().map(|&x| BigInt::from(x)).collect();
    count_weighted_monomials(&w, &BigInt::from(degree))
}

/// A signed monomial `coeff * z^exponents` in the Cox variables; the entries
/// of Taylor-complex differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMonomial {
    pub coeff: BigInt,
    pub exponents: Vec<u64>,
}

/// A bounded complex of equivariant line bundles `O(sum c_i D_i)` with
/// monomial differential entries. Degrees are cohomological; the augmented
/// term `O` of a Taylor complex sits in degree `0`, the top subset in degree
/// `-k`.
#[derive(Debug, Clone)]
pub struct LineBundleComplex {
    /// Per term: (degree, generator subset, divisor coefficients).
    pub terms: Vec<(i64, Vec<usize>, DivisorCoeffs)>,
    /// Differential entries `(from term, to term) -> signed monomial`.
    pub diff: BTreeMap<(usize, usize), SignedMonomial>,
}

impl LineBundleComplex {
    /// Symbolic check that the differential squares to zero.
    pub fn d_squared_is_zero(&self) -> bool {
        let mut square: BTreeMap<(usize, usize, Vec<u64>), BigInt> = BTreeMap::new();
        for (&(a, b), f) in &self.diff {
            for (&(b2, c), g) in &self.diff {
                if b != b2 {
                    continue;
                }
                let exps: Vec<u64> = f
                    .exponents
                    .iter()
                    .zip(&g.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                *square.entry((a, c, exps)).or_insert_with(BigInt::zero) +=
                    &f.coeff * &g.coeff;
            }
        }
        square.values().all(Zero::is_zero)
    }

    /// Dimensions of the cohomology of the weight-`w` strand, degree by
    /// degree. The strand of `O(-a_S)` at multidegree `w` is 1-dimensional
    /// exactly when `w >= a_S` componentwise.
    pub fn weight_strand_homology(&self, w: &[i64]) -> BTreeMap<i64, usize> {
        // Divisor coefficients store -a_S, so the strand is present when
        // w + c >= 0 componentwise.
        let present: Vec<bool> = self
            .terms
            .iter()
            .map(|(_, _, c)| {
                c.0.iter()
                    .zip(w)
                    .all(|(ci, &wi)| ci + BigInt::from(wi) >= BigInt::zero())
            })
            .collect();
        let mut degrees: BTreeSet<i64> = BTreeSet::new();
        for (i, (d, _, _)) in self.terms.iter().enumerate() {
            if present[i] {
                degrees.insert(*d);
            }
        }
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for &d in &degrees {
            let dom: Vec<usize> = (0..self.terms.len())
                .filter(|&i| present[i] && self.terms[i].0 == d)
                .collect();
            let cod: Vec<usize> = (0..self.terms.len())
                .filter(|&i| present[i] && self.terms[i].0 == d + 1)
                .collect();
            dims.insert(d, dom.len());
            if dom.is_empty() || cod.is_empty() {
                ranks.insert(d, 0);
                continue;
            }
            let mut mat: Vec<QVec> = vec![vec![BigRational::zero(); dom.len()]; cod.len()];
            for (cj, &j) in dom.iter().enumerate() {
                for (ri, &i) in cod.iter().enumerate() {
                    if let Some(m) = self.diff.get(&(j, i)) {
                        mat[ri][cj] = BigRational::from(m.coeff.clone());
                    }
                }
            }
            ranks.insert(d, crate::zlat::rank(&mat));
        }
        let mut out = BTreeMap::new();
        for &d in &degrees {
            let dim = dims.get(&d).copied().unwrap_or(0);
            let r_out = ranks.get(&d).copied().unwrap_or(0);
            let r_in = ranks.get(&(d - 1)).copied().unwrap_or(0);
            let h = dim - r_out - r_in;
            if h > 0 {
                out.insert(d, h);
            }
        }
        out
    }
}

/// The Taylor complex of a monomial ideal in the Cox variables: one term per
/// subset `S` of the generators, twisted by `-lcm(S)`, with alternating
/// inclusion-sign differentials. Resolves the quotient by the ideal, so the
/// weight strands are exact except in degree zero.
pub fn taylor_resolution(
    fan: &StackyFan,
    monomials: &[Vec<u64>],
) -> Result<LineBundleComplex, LineBundleError> {
    let r = fan.ray_count();
    for m in monomials {
        if m.len() != r {
            return Err(LineBundleError::MonomialLength { got: m.len(), want: r });
        }
    }
    let k = monomials.len();
    let lcm = |s: &[usize]| -> Vec<u64> {
        let mut out = vec![0u64; r];
        for &i in s {
            for (o, &e) in out.iter_mut().zip(&monomials[i]) {
                *o = (*o).max(e);
            }
        }
        out
    };

    // Subsets in (size, lex) order; index them for differential lookup.
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for size in 1..=k {
        let idx: Vec<usize> = (0..k).collect();
        subsets.extend(crate::zlat::combinations(&idx, size));
    }
    let index_of: BTreeMap<Vec<usize>, usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();

    let terms: Vec<(i64, Vec<usize>, DivisorCoeffs)> = subsets
        .iter()
        .map(|s| {
            let a = lcm(s);
            let coeffs = DivisorCoeffs(a.iter().map(|&e| -BigInt::from(e)).collect());
            (-(s.len() as i64), s.clone(), coeffs)
        })
        .collect();

    let mut diff = BTreeMap::new();
    for (from, s) in subsets.iter().enumerate() {
        if s.is_empty() {
            continue;
        }
        let a_s = lcm(s);
        for (pos, &drop) in s.iter().enumerate() {
            let t: Vec<usize> = s.iter().copied().filter(|&x| x != drop).collect();
            let a_t = lcm(&t);
            let to = index_of[&t];
            let sign = if pos % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let exps: Vec<u64> = a_s.iter().zip(&a_t).map(|(x, y)| x - y).collect();
            diff.insert((from, to), SignedMonomial { coeff: sign, exponents: exps });
        }
    }
    Ok(LineBundleComplex { terms, diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans;
    use crate::gale;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn p1_divisor_values_and_apexes() {
        let fan = fans::p1();
        let d = 3i64;
        let tw = from_divisor(&fan, &DivisorCoeffs::from_i64(&[0, d])).unwrap();
        assert_eq!(tw.values(), &[vec![BigInt::zero()], vec![BigInt::from(-d)]]);
        let a = apexes(&fan, &tw).unwrap();
        assert_eq!(a, vec![vec![q(0, 1)], vec![q(d, 1)]]);
    }

    #[test]
    fn zero_divisor_is_zero_polytope() {
        for (_, fan) in fans::complete_fans() {
            let tw = from_divisor(&fan, &DivisorCoeffs::zero(fan.ray_count())).unwrap();
            assert!(tw.values().iter().all(|v| v.iter().all(Zero::is_zero)));
            for a in apexes(&fan, &tw).unwrap() {
                assert!(a.iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn p112_o1_has_half_integral_apex() {
        let fan = fans::p112();
        let tw = from_divisor(&fan, &DivisorCoeffs::from_i64(&[1, 0, 0])).unwrap();
        let a = apexes(&fan, &tw).unwrap();
        assert_eq!(a[0], vec![q(-1, 1), q(0, 1)]);
        assert_eq!(a[1], vec![q(0, 1), q(0, 1)]);
        assert_eq!(a[2], vec![q(-1, 1), q(1, 2)]);
    }

    #[test]
    fn validate_detects_mismatched_shared_rays() {
        let fan = fans::p112();
        // Charts <0,1>, <1,2>, <2,0>; put inconsistent values on ray 1.
        let tw = TwistedPolytope::new(
            &fan,
            vec![
                vec![BigInt::zero(), BigInt::zero()],
                vec![BigInt::one(), BigInt::zero()],
                vec![BigInt::zero(), BigInt::zero()],
            ],
        )
        .unwrap();
        let violations = tw.validate(&fan);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].ray, 1);
        // Divisor bundles are always compatible.
        let ok = from_divisor(&fan, &DivisorCoeffs::from_i64(&[5, -3, 2])).unwrap();
        assert!(ok.validate(&fan).is_empty());
    }

    #[test]
    fn add_negate_roundtrip() {
        let fan = fans::p112();
        let a = from_divisor(&fan, &DivisorCoeffs::from_i64(&[1, 2, -1])).unwrap();
        let zero = from_divisor(&fan, &DivisorCoeffs::zero(3)).unwrap();
        assert_eq!(a.add(&zero), a);
        assert_eq!(a.negate().negate(), a);
        // O(1) + O(1) = O(2)
        let o1 = from_divisor(&fan, &DivisorCoeffs::from_i64(&[1, 0, 0])).unwrap();
        let o2 = from_divisor(&fan, &DivisorCoeffs::from_i64(&[2, 0, 0])).unwrap();
        assert_eq!(o1.add(&o1), o2);
    }

    #[test]
    fn from_divisor_is_additive() {
        let fan = fans::p1xp1();
        let c1 = DivisorCoeffs::from_i64(&[1, -2, 0, 3]);
        let c2 = DivisorCoeffs::from_i64(&[0, 1, 2, -1]);
        let sum = DivisorCoeffs(c1.0.iter().zip(&c2.0).map(|(a, b)| a + b).collect());
        assert_eq!(
            from_divisor(&fan, &c1).unwrap().add(&from_divisor(&fan, &c2).unwrap()),
            from_divisor(&fan, &sum).unwrap()
        );
    }

    #[test]
    fn ampleness_decisions() {
        let p112 = fans::p112();
        // O(0): all apexes coincide.
        let o0 = from_divisor(&p112, &DivisorCoeffs::zero(3)).unwrap();
        let cert = is_q_ample(&p112, &o0).unwrap();
        assert!(!cert.ample);
        assert!(!cert.apexes_distinct);
        // O(1) is ample.
        let o1 = from_divisor(&p112, &DivisorCoeffs::from_i64(&[1, 0, 0])).unwrap();
        assert!(is_q_ample(&p112, &o1).unwrap().ample);
        // O(-1) on P^2 fails condition (ii).
        let p2 = fans::p2();
        let om1 = from_divisor(&p2, &DivisorCoeffs::from_i64(&[-1, 0, 0])).unwrap();
        let cert = is_q_ample(&p2, &om1).unwrap();
        assert!(!cert.ample);
        assert!(!cert.hull_inside_halfspaces);
    }

    #[test]
    fn ampleness_scaling_invariance() {
        let fan = fans::p112();
        for c in [[1i64, 0, 0], [0, 0, 0], [-1, 0, 0], [1, 1, 1]] {
            let tw = from_divisor(&fan, &DivisorCoeffs::from_i64(&c)).unwrap();
            let base = is_q_ample(&fan, &tw).unwrap().ample;
            for n in 1..=5 {
                let scaled = tw.scale(&BigInt::from(n));
                assert_eq!(is_q_ample(&fan, &scaled).unwrap().ample, base);
            }
        }
    }

    #[test]
    fn section_weights_examples() {
        let p1 = fans::p1();
        let tw = from_divisor(&p1, &DivisorCoeffs::from_i64(&[0, 2])).unwrap();
        let w = section_weights(&p1, &tw).unwrap();
        let expected: BTreeSet<Vec<BigInt>> =
            [vec![BigInt::from(0)], vec![BigInt::from(1)], vec![BigInt::from(2)]]
                .into_iter()
                .collect();
        assert_eq!(w, expected);

        let p112 = fans::p112();
        let o3 = from_divisor(&p112, &DivisorCoeffs::from_i64(&[3, 0, 0])).unwrap();
        assert_eq!(section_weights(&p112, &o3).unwrap().len(), 6);

        // Dual of an ample bundle has no sections.
        let o1 = from_divisor(&p112, &DivisorCoeffs::from_i64(&[1, 0, 0])).unwrap();
        assert!(section_weights(&p112, &o1.negate()).unwrap().is_empty());

        // Non-complete fans are rejected.
        assert!(matches!(
            from_divisor(&fans::affine2(), &DivisorCoeffs::zero(2)),
            Err(LineBundleError::NotComplete)
        ));
    }

    #[test]
    fn section_count_matches_weighted_monomials() {
        // |sections(c)| = #monomials of the matching graded degree on
        // weighted projective lines/planes, degrees 0..6.
        let cases: Vec<(StackyFan, Vec<u64>)> = vec![
            (fans::p1(), vec![1, 1]),
            (fans::p2(), vec![1, 1, 1]),
            (fans::p112(), vec![1, 2, 1]),
            (fans::football(), vec![1, 2]),
        ];
        for (fan, weights) in cases {
            // The ray weights come from the Gale dual; sanity-check them.
            let gale = gale::gale_dual(&fan);
            let m = gale.beta_dual.matrix();
            let gale_weights: Vec<BigInt> = (0..m.cols()).map(|j| m.get(0, j).abs()).collect();
            assert_eq!(
                gale_weights,
                weights.iter().map(|&w| BigInt::from(w)).collect::<Vec<_>>()
            );
            for d in 0..=6i64 {
                // Divisor d * D_0 scaled by the first weight keeps degrees
                // aligned: deg(c) = sum c_i w_i.
                let mut c = vec![0i64; fan.ray_count()];
                c[0] = d;
                let tw = from_divisor(&fan, &DivisorCoeffs::from_i64(&c)).unwrap();
                let sections = section_weights(&fan, &tw).unwrap().len();
                let degree = d * weights[0] as i64;
                let count = count_weighted_monomials_u64(&weights, degree);
                assert_eq!(BigInt::from(sections), count, "fan {:?} degree {}", fan, d);
            }
        }
    }

    #[test]
    fn minkowski_superset_property() {
        let fan = fans::p112();
        let a = from_divisor(&fan, &DivisorCoeffs::from_i64(&[1, 0, 0])).unwrap();
        let b = from_divisor(&fan, &DivisorCoeffs::from_i64(&[0, 1, 0])).unwrap();
        let wa = section_weights(&fan, &a).unwrap();
        let wb = section_weights(&fan, &b).unwrap();
        let wsum = section_weights(&fan, &a.add(&b)).unwrap();
        for x in &wa {
            for y in &wb {
                let s: Vec<BigInt> = x.iter().zip(y).map(|(u, v)| u + v).collect();
                assert!(wsum.contains(&s));
            }
        }
    }

    #[test]
    fn weighted_monomial_counts() {
        assert_eq!(count_weighted_monomials_u64(&[1, 1, 2], 2), BigInt::from(4));
        assert_eq!(count_weighted_monomials_u64(&[1, 1, 2], 0), BigInt::from(1));
        assert_eq!(count_weighted_monomials_u64(&[1, 1, 1], 3), BigInt::from(10));
        assert_eq!(count_weighted_monomials_u64(&[1, 1, 2], -1), BigInt::zero());
        // dim S_d for P(1,1,2): 1, 2, 4, 6.
        let dims: Vec<BigInt> = (0..4)
            .map(|d| count_weighted_monomials_u64(&[1, 1, 2], d))
            .collect();
        assert_eq!(
            dims,
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(4), BigInt::from(6)]
        );
    }

    #[test]
    fn taylor_principal_ideal() {
        let fan = fans::affine2();
        let complex = taylor_resolution(&fan, &[vec![1, 0]]).unwrap();
        assert_eq!(complex.terms.len(), 2);
        assert!(complex.d_squared_is_zero());
        assert_eq!(
            complex.terms[1].2,
            DivisorCoeffs::from_i64(&[-1, 0])
        );
    }

    #[test]
    fn taylor_koszul_on_affine_plane() {
        let fan = fans::affine2();
        let complex = taylor_resolution(&fan, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(complex.terms.len(), 4);
        assert!(complex.d_squared_is_zero());
        // Exact except at the end on a 5x5 weight box.
        for wx in 0..5 {
            for wy in 0..5 {
                let h = complex.weight_strand_homology(&[wx, wy]);
                assert!(h.keys().all(|&d| d == 0), "unexpected homology at {:?}", h);
            }
        }
        // Degree-0 homology is the quotient ring strand: 1 exactly on the
        // axes (monomials not in the ideal).
        let h = complex.weight_strand_homology(&[0, 0]);
        assert_eq!(h.get(&0), Some(&1));
        let h = complex.weight_strand_homology(&[1, 1]);
        assert_eq!(h.get(&0), None);
    }

    #[test]
    fn taylor_non_squarefree() {
        let fan = fans::affine2();
        let complex = taylor_resolution(&fan, &[vec![2, 0], vec![1, 1]]).unwrap();
        // Subsets: {}, {0}, {1}, {0,1}; lcm of the pair is z0^2 z1.
        assert_eq!(complex.terms.len(), 4);
        assert_eq!(complex.terms[3].2, DivisorCoeffs::from_i64(&[-2, -1]));
        assert!(complex.d_squared_is_zero());
        for wx in 0..7 {
            for wy in 0..7 {
                let h = complex.weight_strand_homology(&[wx, wy]);
                assert!(h.keys().all(|&d| d == 0));
            }
        }
    }
}
