//! Rational polyhedral cones: exact duality, membership and the small
//! rational linear algebra the rest of the crate leans on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

use super::matrix::primitive_vector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("generators are linearly dependent; cone is not simplicial")]
    DependentGenerators,
    #[error("vector length {got} does not match ambient dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
}

pub type QVec = Vec<BigRational>;

pub fn qvec_from_i64(v: &[i64]) -> QVec {
    v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()
}

pub fn qvec_from_int(v: &[BigInt]) -> QVec {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales a rational vector to a primitive integer vector pointing the same
/// way. The zero vector maps to zero.
pub fn primitive_direction(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive_vector(&ints)
}

/// Reduced row echelon form over the rationals. Returns pivot columns.
pub fn rref(m: &mut Vec<QVec>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &factor;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Kernel basis of the row matrix, over the rationals.
pub fn kernel(rows: &[QVec], cols: usize) -> Vec<QVec> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `rows * x = rhs` exactly. `Ok(None)` means inconsistent. When the
/// system is underdetermined the free variables are set to zero.
///
/// `unique` additionally reports whether the solution was unique.
pub fn solve(rows: &[QVec], rhs: &[BigRational]) -> Option<(QVec, bool)> {
    assert_eq!(rows.len(), rhs.len());
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<QVec> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    // Inconsistent iff a pivot lands in the rhs column.
    if pivots.last().is_some_and(|&c| c == cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][cols].clone();
    }
    Some((x, pivots.len() == cols))
}

/// A rational polyhedral cone, generated by finitely many rays
/// (V-representation), with an optional list of halfspace normals
/// (H-representation, the set `{x : <h, x> >= 0 for all h}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    ambient_dim: usize,
    generators: Vec<QVec>,
    halfspaces: Option<Vec<QVec>>,
}

impl RationalCone {
    pub fn from_generators(ambient_dim: usize, generators: Vec<QVec>) -> Self {
        assert!(generators.iter().all(|g| g.len() == ambient_dim));
        RationalCone {
            ambient_dim,
            generators,
            halfspaces: None,
        }
    }

    pub fn from_int_generators(ambient_dim: usize, generators: &[Vec<BigInt>]) -> Self {
        Self::from_generators(
            ambient_dim,
            generators.iter().map(|g| qvec_from_int(g)).collect(),
        )
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_generators(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn halfspaces(&self) -> Option<&[QVec]> {
        self.halfspaces.as_deref()
    }

    pub fn dim(&self) -> usize {
        rank(&self.generators)
    }

    /// Checks that the two stored representations describe the same set, at
    /// the generator/normal level: every generator satisfies every halfspace,
    /// and every extreme ray of the halfspace system is a nonnegative
    /// combination of the generators.
    pub fn representations_agree(&self) -> bool {
        let Some(hs) = &self.halfspaces else {
            return true;
        };
        for g in &self.generators {
            if hs.iter().any(|h| dot(h, g).is_negative()) {
                return false;
            }
        }
        for ray in vrep_from_hrep(self.ambient_dim, hs) {
            let q = qvec_from_int(&ray);
            if !cone_membership(&self.generators, &q) {
                return false;
            }
        }
        true
    }
}

/// Membership `v in cone(gens)` for an arbitrary (not necessarily simplicial)
/// generating set, decided exactly by enumeration of simplicial subcones.
pub fn cone_membership(gens: &[QVec], v: &[BigRational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let d = rank(gens);
    // Caratheodory: v is in the cone iff it is in some simplicial subcone
    // spanned by an independent subset of size at most d.
    let idx: Vec<usize> = (0..gens.len()).collect();
    for size in 1..=d {
        for subset in combinations(&idx, size) {
            let sub: Vec<QVec> = subset.iter().map(|&i| gens[i].clone()).collect();
            if rank(&sub) < size {
                continue;
            }
            if let Ok(Some(_)) = simplicial_membership(&sub, v) {
                return true;
            }
        }
    }
    false
}

pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Barycentric coordinates of `v` in the simplicial cone spanned by `gens`:
/// the unique `lambda >= 0` with `v = sum lambda_i g_i`, or `None` when `v`
/// lies outside the cone. Errors if the generators are dependent.
pub fn simplicial_membership(
    gens: &[QVec],
    v: &[BigRational],
) -> Result<Option<QVec>, ConeError> {
    let ambient = v.len();
    if gens.is_empty() {
        return Ok(if v.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        });
    }
    if gens.iter().any(|g| g.len() != ambient) {
        return Err(ConeError::DimensionMismatch {
            got: gens[0].len(),
            want: ambient,
        });
    }
    if rank(gens) < gens.len() {
        return Err(ConeError::DependentGenerators);
    }
    // Solve G^T lambda = v (generators as columns).
    let rows: Vec<QVec> = (0..ambient)
        .map(|i| gens.iter().map(|g| g[i].clone()).collect())
        .collect();
    match solve(&rows, v) {
        None => Ok(None),
        Some((lambda, _)) => {
            if lambda.iter().any(Signed::is_negative) {
                Ok(None)
            } else {
                Ok(Some(lambda))
            }
        }
    }
}

/// Is `v` in the relative interior of the simplicial cone spanned by `gens`?
pub fn simplicial_relint(gens: &[QVec], v: &[BigRational]) -> Result<bool, ConeError> {
    Ok(match simplicial_membership(gens, v)? {
        Some(lambda) => lambda.iter().all(Signed::is_positive),
        None => false,
    })
}

/// Enumerates the generators (V-representation) of `{x : <h, x> >= 0 for all
/// h in normals}`, exactly. Lineality directions contribute a pair `+-b` of
/// generators each. Output vectors are primitive integer rays, deduplicated
/// and sorted.
pub fn vrep_from_hrep(ambient: usize, normals: &[QVec]) -> Vec<Vec<BigInt>> {
    if normals.is_empty() {
        let mut gens = Vec::new();
        for i in 0..ambient {
            let mut e = vec![BigInt::zero(); ambient];
            e[i] = BigInt::one();
            gens.push(e.clone());
            e[i] = -BigInt::one();
            gens.push(e);
        }
        return gens;
    }
    let lineality = kernel(normals, ambient);
    let ldim = lineality.len();
    let m = ambient - ldim;

    let mut out: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for l in &lineality {
        let p = primitive_direction(l);
        out.insert(p.iter().map(|x| -x).collect());
        out.insert(p);
    }
    if m == 0 {
        return out.into_iter().collect();
    }

    let idx: Vec<usize> = (0..normals.len()).collect();
    for subset in combinations(&idx, m - 1) {
        let mut rows: Vec<QVec> = subset.iter().map(|&i| normals[i].clone()).collect();
        // Restrict to the orthogonal complement of the lineality space.
        rows.extend(lineality.iter().cloned());
        let ker = kernel(&rows, ambient);
        if ker.len() != 1 {
            continue;
        }
        let ray = primitive_direction(&ker[0]);
        for cand in [ray.clone(), ray.iter().map(|x| -x).collect()] {
            let q = qvec_from_int(&cand);
            if normals.iter().all(|h| !dot(h, &q).is_negative()) {
                out.insert(cand);
            }
        }
    }
    out.into_iter().collect()
}

/// The dual cone `{x : <x, g> >= 0 for every generator g of c}`, with
/// generators computed exactly and the defining halfspaces recorded.
pub fn dual_cone(c: &RationalCone) -> RationalCone {
    let gens = vrep_from_hrep(c.ambient_dim(), c.generators());
    RationalCone {
        ambient_dim: c.ambient_dim(),
        generators: gens.iter().map(|g| qvec_from_int(g)).collect(),
        halfspaces: Some(c.generators().to_vec()),
    }
}

/// H-representation of a simplicial cone: inequality normals (dual basis
/// inside the span) followed by equality constraints for the span, encoded
/// as opposite halfspace pairs.
pub fn simplicial_hrep(ambient: usize, gens: &[QVec]) -> Result<Vec<QVec>, ConeError> {
    if rank(gens) < gens.len() {
        return Err(ConeError::DependentGenerators);
    }
    let d = gens.len();
    // Extend the generators to a basis with standard vectors.
    let mut basis: Vec<QVec> = gens.to_vec();
    for i in 0..ambient {
        if basis.len() == ambient {
            break;
        }
        let mut e = vec![BigRational::zero(); ambient];
        e[i] = BigRational::one();
        basis.push(e);
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    assert_eq!(basis.len(), ambient, "could not extend to a basis");
    // Rows of the inverse matrix form the dual basis.
    let mut aug: Vec<QVec> = (0..ambient)
        .map(|i| {
            let mut row: QVec = basis.iter().map(|b| b[i].clone()).collect();
            let mut rhs = vec![BigRational::zero(); ambient];
            rhs[i] = BigRational::one();
            row.extend(rhs);
            row
        })
        .collect();
    rref(&mut aug);
    let inv_rows: Vec<QVec> = (0..ambient)
        .map(|j| aug[j][ambient..].to_vec())
        .collect();
    let mut hs = Vec::new();
    for (j, row) in inv_rows.iter().enumerate() {
        if j < d {
            hs.push(row.clone());
        } else {
            hs.push(row.clone());
            hs.push(row.iter().map(|x| -x).collect());
        }
    }
    Ok(hs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QVec {
        qvec_from_i64(v)
    }

    #[test]
    fn dual_of_first_quadrant_is_itself() {
        let c = RationalCone::from_generators(2, vec![q(&[1, 0]), q(&[0, 1])]);
        let d = dual_cone(&c);
        let gens: Vec<Vec<BigInt>> = d.generators().iter().map(|g| primitive_direction(g)).collect();
        assert_eq!(
            gens,
            vec![
                vec![BigInt::from(0), BigInt::from(1)],
                vec![BigInt::from(1), BigInt::from(0)]
            ]
        );
        assert!(d.representations_agree());
    }

    #[test]
    fn dual_of_skew_cone() {
        // Oracle: normals to the generators, oriented into the cone.
        let c = RationalCone::from_generators(2, vec![q(&[1, 0]), q(&[1, 2])]);
        let d = dual_cone(&c);
        let gens: BTreeSet<Vec<BigInt>> =
            d.generators().iter().map(|g| primitive_direction(g)).collect();
        let expected: BTreeSet<Vec<BigInt>> = [
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(2), BigInt::from(-1)],
        ]
        .into_iter()
        .collect();
        assert_eq!(gens, expected);
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let c = RationalCone::zero(2);
        let d = dual_cone(&c);
        assert_eq!(d.generators().len(), 4);
        // Both plus-minus pairs of the standard basis.
        let gens: BTreeSet<Vec<BigInt>> =
            d.generators().iter().map(|g| primitive_direction(g)).collect();
        assert!(gens.contains(&vec![BigInt::from(1), BigInt::zero()]));
        assert!(gens.contains(&vec![BigInt::from(-1), BigInt::zero()]));
        assert!(gens.contains(&vec![BigInt::zero(), BigInt::from(1)]));
        assert!(gens.contains(&vec![BigInt::zero(), BigInt::from(-1)]));
    }

    #[test]
    fn dual_of_halfline_has_lineality() {
        let c = RationalCone::from_generators(2, vec![q(&[1, 0])]);
        let d = dual_cone(&c);
        let gens: BTreeSet<Vec<BigInt>> =
            d.generators().iter().map(|g| primitive_direction(g)).collect();
        let expected: BTreeSet<Vec<BigInt>> = [
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(-1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ]
        .into_iter()
        .collect();
        assert_eq!(gens, expected);
    }

    #[test]
    fn double_dual_is_identity_on_full_cones() {
        for gens in [
            vec![q(&[1, 0]), q(&[0, 1])],
            vec![q(&[1, 0]), q(&[1, 2])],
            vec![q(&[2, -1]), q(&[-1, 2])],
        ] {
            let c = RationalCone::from_generators(2, gens.clone());
            let dd = dual_cone(&dual_cone(&c));
            // Set equality via membership both ways.
            for g in dd.generators() {
                assert!(cone_membership(&gens, g), "dd generator inside c");
            }
            for g in &gens {
                assert!(cone_membership(dd.generators(), g), "c generator inside dd");
            }
        }
    }

    #[test]
    fn membership_basics() {
        let gens = vec![q(&[1, 0]), q(&[1, 2])];
        // v = g_1
        assert_eq!(
            simplicial_membership(&gens, &q(&[1, 0])).unwrap(),
            Some(vec![BigRational::one(), BigRational::zero()])
        );
        // v = (1,1) = 1/2 g_1 + 1/2 g_2
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(
            simplicial_membership(&gens, &q(&[1, 1])).unwrap(),
            Some(vec![half.clone(), half])
        );
        // outside
        assert_eq!(
            simplicial_membership(&vec![q(&[1, 0]), q(&[0, 1])], &q(&[-1, 0])).unwrap(),
            None
        );
        // dependent input
        assert_eq!(
            simplicial_membership(&vec![q(&[1, 0]), q(&[2, 0])], &q(&[1, 0])),
            Err(ConeError::DependentGenerators)
        );
    }

    #[test]
    fn relint_membership() {
        let gens = vec![q(&[1, 0]), q(&[0, 1])];
        assert!(simplicial_relint(&gens, &q(&[1, 1])).unwrap());
        assert!(!simplicial_relint(&gens, &q(&[1, 0])).unwrap());
        assert!(!simplicial_relint(&gens, &q(&[-1, 1])).unwrap());
    }

    #[test]
    fn hrep_of_simplicial_cone() {
        let gens = vec![q(&[1, 0])];
        let hs = simplicial_hrep(2, &gens).unwrap();
        // x >= 0 plus y = 0 as two halfspaces
        assert_eq!(hs.len(), 3);
        let rays = vrep_from_hrep(2, &hs);
        assert_eq!(rays, vec![vec![BigInt::from(1), BigInt::from(0)]]);
    }
}
