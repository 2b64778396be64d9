//! Stacky fans: the combinatorial datum `(N, Sigma, beta)` of a toric DM
//! stack, together with validation, completeness, rigidification, the lifted
//! fan, and morphisms of stacky fans.
//!
//! `N` is a finitely generated abelian group, the fan is simplicial and
//! recorded by ray-index sets, and each ray carries a full element
//! `b_i in N` (free part plus torsion part). The geometric ray is the
//! halfline through the free part `b̄_i`; the torsion data only enters the
//! Gale-dual side.

use crate::zlat::{
    combinations, cone_membership, dot, primitive_vector, qvec_from_int, rank, simplicial_hrep,
    simplicial_membership, simplicial_relint, vrep_from_hrep, ConeError, FgAbelianGroup, GroupHom,
    IntMatrix, QVec,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A cone of the fan, identified by its sorted set of ray indices. The empty
/// set is the zero cone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeId(Vec<usize>);

impl ConeId {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ConeId(indices)
    }

    pub fn zero() -> Self {
        ConeId(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Is `self` a subset of `other` (as ray sets)?
    pub fn is_subset_of(&self, other: &ConeId) -> bool {
        self.0.iter().all(|i| other.contains_index(*i))
    }

    pub fn intersection(&self, other: &ConeId) -> ConeId {
        ConeId(self.0.iter().copied().filter(|i| other.contains_index(*i)).collect())
    }

    /// All subsets, i.e. the faces of a simplicial cone.
    pub fn faces(&self) -> Vec<ConeId> {
        let n = self.0.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1u32 << n) {
            let face: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| self.0[i]).collect();
            out.push(ConeId(face));
        }
        out
    }
}

impl fmt::Debug for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.0)
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "{{0}}")
        } else {
            let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "<{}>", s.join(","))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("ray {index} has {got} coordinates, lattice has {want} generators")]
    RayLength { index: usize, got: usize, want: usize },
    #[error("cone references ray index {index}, but there are only {rays} rays")]
    RayIndexOutOfRange { index: usize, rays: usize },
    #[error("ray {index} has zero image in the free quotient")]
    ZeroRayImage { index: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("maximal cone {cone} is not full-dimensional")]
    NotFullDimensional { cone: String },
    #[error("cone error: {0}")]
    Cone(#[from] ConeError),
}

/// One structural violation found by [`StackyFan::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanViolation {
    /// Rays of a cone are linearly dependent over the rationals.
    DependentRays { cone: ConeId },
    /// The geometric rays do not span `N_R`; equivalently the cokernel of
    /// `beta` is infinite.
    RaysDoNotSpan,
    /// Two rays point along the same halfline.
    DuplicateRayDirection { first: usize, second: usize },
    /// Two cones whose geometric intersection is not their common face.
    IntersectionNotFace { first: ConeId, second: ConeId },
    /// A ray that appears in no cone of the fan.
    UnusedRay { index: usize },
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::DependentRays { cone } => write!(f, "dependent rays in {}", cone),
            FanViolation::RaysDoNotSpan => write!(f, "rays do not span N_R (coker beta infinite)"),
            FanViolation::DuplicateRayDirection { first, second } => {
                write!(f, "rays {} and {} span the same halfline", first, second)
            }
            FanViolation::IntersectionNotFace { first, second } => {
                write!(f, "cones {} and {} do not meet in a common face", first, second)
            }
            FanViolation::UnusedRay { index } => write!(f, "ray {} occurs in no cone", index),
        }
    }
}

/// Structured validation report; empty means the fan is valid.
#[derive(Debug, Clone, Default)]
pub struct FanValidation {
    pub violations: Vec<FanViolation>,
}

impl FanValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A stacky fan `(N, Sigma, beta)`.
#[derive(Clone, PartialEq, Eq)]
pub struct StackyFan {
    lattice: FgAbelianGroup,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<ConeId>,
    cones: Vec<ConeId>,
}

impl StackyFan {
    /// Builds a stacky fan from the lattice, the ray elements, and the list
    /// of maximal cones. The cone list is closed under faces automatically;
    /// the order of `max_cones` is preserved and fixes the total ordering
    /// used by every Cech-style construction downstream.
    pub fn new(
        lattice: FgAbelianGroup,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<ConeId>,
    ) -> Result<Self, FanError> {
        let want = lattice.generator_count();
        let n = lattice.free_rank();
        let mut canonical_rays = Vec::with_capacity(rays.len());
        for (index, r) in rays.iter().enumerate() {
            if r.len() != want {
                return Err(FanError::RayLength {
                    index,
                    got: r.len(),
                    want,
                });
            }
            if r[..n].iter().all(Zero::is_zero) {
                return Err(FanError::ZeroRayImage { index });
            }
            canonical_rays.push(lattice.reduce(r).expect("length checked"));
        }
        for c in &max_cones {
            for &i in c.indices() {
                if i >= rays.len() {
                    return Err(FanError::RayIndexOutOfRange {
                        index: i,
                        rays: rays.len(),
                    });
                }
            }
        }
        // Face closure, in a canonical order: maximal cones first in
        // definition order, then the remaining faces by descending dimension
        // and lexicographic index order. The zero cone comes last.
        let max_set: BTreeSet<ConeId> = max_cones.iter().cloned().collect();
        let mut faces: BTreeSet<ConeId> = BTreeSet::new();
        for c in &max_cones {
            for f in c.faces() {
                if !max_set.contains(&f) {
                    faces.insert(f);
                }
            }
        }
        faces.insert(ConeId::zero());
        let mut rest: Vec<ConeId> = faces.into_iter().filter(|f| !max_set.contains(f)).collect();
        rest.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut cones = max_cones.clone();
        cones.extend(rest);
        Ok(StackyFan {
            lattice,
            rays: canonical_rays,
            max_cones,
            cones,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(
        lattice: FgAbelianGroup,
        rays: &[&[i64]],
        max_cones: &[&[usize]],
    ) -> Result<Self, FanError> {
        Self::new(
            lattice,
            rays.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            max_cones.iter().map(|c| ConeId::new(c.to_vec())).collect(),
        )
    }

    pub fn lattice(&self) -> &FgAbelianGroup {
        &self.lattice
    }

    /// Dimension of `N_R`.
    pub fn dim(&self) -> usize {
        self.lattice.free_rank()
    }

    /// Number of rays.
    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// The full ray element `b_i in N` (free then torsion coordinates).
    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    /// The image `b̄_i` of the ray element in the free quotient.
    pub fn ray_free(&self, i: usize) -> &[BigInt] {
        &self.rays[i][..self.lattice.free_rank()]
    }

    /// The primitive generator of the geometric ray `rho_i`.
    pub fn ray_primitive(&self, i: usize) -> Vec<BigInt> {
        primitive_vector(self.ray_free(i))
    }

    /// All cones, in the canonical order (maximal cones first in definition
    /// order, then lower faces by descending dimension).
    pub fn cones(&self) -> &[ConeId] {
        &self.cones
    }

    pub fn max_cones(&self) -> &[ConeId] {
        &self.max_cones
    }

    pub fn contains_cone(&self, c: &ConeId) -> bool {
        self.cones.contains(c)
    }

    /// Free-part ray generators of a cone, as rational vectors.
    pub fn cone_generators(&self, c: &ConeId) -> Vec<QVec> {
        c.indices().iter().map(|&i| qvec_from_int(self.ray_free(i))).collect()
    }

    /// `beta: Z^r -> N`, the map sending the i-th basis vector to `b_i`.
    pub fn beta(&self) -> GroupHom {
        let r = self.ray_count();
        let g = self.lattice.generator_count();
        let mut m = IntMatrix::zeros(g, r);
        for (j, ray) in self.rays.iter().enumerate() {
            for (i, v) in ray.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        GroupHom::new(FgAbelianGroup::free(r), self.lattice.clone(), m)
            .expect("free source always respects torsion")
    }

    /// The subgroup generators of `N_sigma` (full ray elements of the cone).
    pub fn cone_subgroup_generators(&self, c: &ConeId) -> Vec<Vec<BigInt>> {
        c.indices().iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Membership of a rational point in the (closed) cone.
    pub fn cone_contains(&self, c: &ConeId, x: &[BigRational]) -> bool {
        matches!(simplicial_membership(&self.cone_generators(c), x), Ok(Some(_)))
    }

    /// The unique cone whose relative interior contains `x`, if any.
    pub fn cone_with_point_in_relint(&self, x: &[BigRational]) -> Option<&ConeId> {
        self.cones
            .iter()
            .find(|c| simplicial_relint(&self.cone_generators(c), x).unwrap_or(false))
    }

    /// Full validity report; never aborts.
    pub fn validate(&self) -> FanValidation {
        let mut violations = Vec::new();
        let n = self.dim();

        for c in &self.cones {
            let gens = self.cone_generators(c);
            if rank(&gens) < gens.len() {
                violations.push(FanViolation::DependentRays { cone: c.clone() });
            }
        }

        let all_rays: Vec<QVec> = (0..self.ray_count())
            .map(|i| qvec_from_int(self.ray_free(i)))
            .collect();
        if rank(&all_rays) < n {
            violations.push(FanViolation::RaysDoNotSpan);
        }

        for i in 0..self.ray_count() {
            for j in i + 1..self.ray_count() {
                if self.ray_primitive(i) == self.ray_primitive(j) {
                    violations.push(FanViolation::DuplicateRayDirection { first: i, second: j });
                }
            }
        }

        let used: BTreeSet<usize> = self
            .cones
            .iter()
            .flat_map(|c| c.indices().iter().copied())
            .collect();
        for i in 0..self.ray_count() {
            if !used.contains(&i) {
                violations.push(FanViolation::UnusedRay { index: i });
            }
        }

        // Pairwise: the geometric intersection of two cones must be the cone
        // on their shared rays. Checking maximal cones suffices for a fan,
        // but cones that are not faces of any maximal cone are also covered
        // since we iterate over the full list.
        let dependent: BTreeSet<ConeId> = violations
            .iter()
            .filter_map(|v| match v {
                FanViolation::DependentRays { cone } => Some(cone.clone()),
                _ => None,
            })
            .collect();
        for a in 0..self.cones.len() {
            for b in a + 1..self.cones.len() {
                let (ca, cb) = (&self.cones[a], &self.cones[b]);
                if ca.is_subset_of(cb) || cb.is_subset_of(ca) {
                    continue;
                }
                if dependent.contains(ca) || dependent.contains(cb) {
                    continue;
                }
                if !self.pair_meets_in_common_face(ca, cb) {
                    violations.push(FanViolation::IntersectionNotFace {
                        first: ca.clone(),
                        second: cb.clone(),
                    });
                }
            }
        }

        FanValidation { violations }
    }

    fn pair_meets_in_common_face(&self, a: &ConeId, b: &ConeId) -> bool {
        let ga = self.cone_generators(a);
        let gb = self.cone_generators(b);
        let n = self.dim();
        let (Ok(ha), Ok(hb)) = (simplicial_hrep(n, &ga), simplicial_hrep(n, &gb)) else {
            return false;
        };
        let mut normals = ha;
        normals.extend(hb);
        let shared = a.intersection(b);
        let shared_gens = self.cone_generators(&shared);
        // Every generator of the geometric intersection must lie in the cone
        // on the shared rays; the other inclusion is automatic.
        for g in vrep_from_hrep(n, &normals) {
            let q = qvec_from_int(&g);
            match simplicial_membership(&shared_gens, &q) {
                Ok(Some(_)) => {}
                _ => return false,
            }
        }
        true
    }

    /// Completeness of the fan: all maximal cones are `n`-dimensional and
    /// every `(n-1)`-dimensional face lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        if self.max_cones.is_empty() {
            return false;
        }
        if self.max_cones.iter().any(|c| c.len() != n) {
            return false;
        }
        let mut wall_count: BTreeMap<ConeId, usize> = BTreeMap::new();
        for c in &self.max_cones {
            let idx = c.indices();
            for skip in 0..idx.len() {
                let wall: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                *wall_count.entry(ConeId::new(wall)).or_insert(0) += 1;
            }
        }
        wall_count.values().all(|&c| c == 2)
    }

    /// The rigidification: `N` replaced by its torsion-free quotient, rays by
    /// their free images (kept non-primitive if `beta` maps them so), cones
    /// unchanged.
    pub fn rigidify(&self) -> StackyFan {
        let n = self.dim();
        StackyFan::new(
            FgAbelianGroup::free(n),
            self.rays.iter().map(|r| r[..n].to_vec()).collect(),
            self.max_cones.clone(),
        )
        .expect("rigidification preserves structural validity")
    }

    /// The lifted fan: for each cone `sigma` the coordinate cone
    /// `sigma~ = cone(e_i : i in sigma)` in `R^r` together with its chart
    /// data.
    pub fn lift_fan(&self) -> LiftedFan {
        let r = self.ray_count();
        let charts = self
            .cones
            .iter()
            .map(|c| {
                let complement = (0..r).filter(|i| !c.contains_index(*i)).collect();
                LiftedChart {
                    cone: c.clone(),
                    basis_indices: c.indices().to_vec(),
                    invertible_coordinates: complement,
                    weight_lattice_rank: c.len(),
                }
            })
            .collect();
        LiftedFan { ambient_rank: r, charts }
    }
}

impl fmt::Debug for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StackyFan {{ N = {}, rays: {:?}, max cones: {:?} }}",
            self.lattice,
            self.rays
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>(),
            self.max_cones
        )
    }
}

/// Description of the lifted fan `Sigma~` inside `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedFan {
    /// Rank of the lifted lattice, i.e. the number of rays.
    pub ambient_rank: usize,
    pub charts: Vec<LiftedChart>,
}

/// Chart data of one lifted cone `sigma~`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedChart {
    pub cone: ConeId,
    /// The lifted cone is spanned by these standard basis vectors of `Z^r`.
    pub basis_indices: Vec<usize>,
    /// Coordinates invertible on the chart (complement of the cone's rays).
    pub invertible_coordinates: Vec<usize>,
    /// Rank of `M_sigma`, the chart's character lattice.
    pub weight_lattice_rank: usize,
}

impl LiftedFan {
    pub fn chart(&self, cone: &ConeId) -> Option<&LiftedChart> {
        self.charts.iter().find(|ch| &ch.cone == cone)
    }
}

/// A morphism of stacky fans: a group homomorphism `N_1 -> N_2` compatible
/// with the fans.
#[derive(Clone, Debug)]
pub struct StackyFanMorphism {
    pub source: StackyFan,
    pub target: StackyFan,
    pub map: GroupHom,
}

/// One violation of the morphism conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    /// The map's shape does not match the two lattices.
    ShapeMismatch,
    /// Some cone of the source maps into no cone of the target.
    ConeHasNoImage { cone: ConeId },
    /// `f(N_sigma1)` is not contained in `N_sigma2` although
    /// `f_R(sigma1) subset sigma2`.
    SubgroupNotCarried { source_cone: ConeId, target_cone: ConeId },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::ShapeMismatch => write!(f, "matrix shape mismatch"),
            MorphismViolation::ConeHasNoImage { cone } => {
                write!(f, "cone {} maps into no target cone", cone)
            }
            MorphismViolation::SubgroupNotCarried { source_cone, target_cone } => write!(
                f,
                "f(N_{}) is not contained in N_{}",
                source_cone, target_cone
            ),
        }
    }
}

/// Report of [`validate_morphism`]: the defining conditions plus the two
/// extra hypotheses needed for pullback functoriality.
#[derive(Debug, Clone)]
pub struct MorphismValidation {
    pub violations: Vec<MorphismViolation>,
    /// Hypothesis (i): the inverse image of every target cone is a union of
    /// source cones.
    pub preimages_are_unions: bool,
    /// Hypothesis (ii): the map `N_1 -> N_2` is injective.
    pub injective: bool,
}

impl MorphismValidation {
    /// The morphism conditions hold (ignoring the extra hypotheses).
    pub fn is_morphism(&self) -> bool {
        self.violations.is_empty()
    }

    /// Morphism conditions and both functoriality hypotheses hold.
    pub fn supports_pullback(&self) -> bool {
        self.is_morphism() && self.preimages_are_unions && self.injective
    }
}

impl StackyFanMorphism {
    pub fn new(source: StackyFan, target: StackyFan, map: GroupHom) -> Self {
        StackyFanMorphism { source, target, map }
    }

    pub fn identity(fan: &StackyFan) -> Self {
        StackyFanMorphism {
            source: fan.clone(),
            target: fan.clone(),
            map: GroupHom::identity(fan.lattice()),
        }
    }

    /// The free-part matrix of the map, acting `N_1bar -> N_2bar`.
    fn free_matrix(&self) -> IntMatrix {
        let n1 = self.source.dim();
        let n2 = self.target.dim();
        let mut m = IntMatrix::zeros(n2, n1);
        for i in 0..n2 {
            for j in 0..n1 {
                m.set(i, j, self.map.matrix().get(i, j).clone());
            }
        }
        m
    }

    /// Image of the free part of a source lattice vector under `f`.
    pub fn apply_free(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.free_matrix().mul_vec(x)
    }

    /// Does `f_R` map the source cone into the target cone?
    pub fn maps_cone_into(&self, c1: &ConeId, c2: &ConeId) -> bool {
        let gens2 = self.target.cone_generators(c2);
        c1.indices().iter().all(|&i| {
            let img = qvec_from_int(&self.apply_free(self.source.ray_free(i)));
            matches!(simplicial_membership(&gens2, &img), Ok(Some(_)))
        })
    }
}

/// Checks the morphism conditions and the two functoriality hypotheses.
pub fn validate_morphism(phi: &StackyFanMorphism) -> MorphismValidation {
    let mut violations = Vec::new();
    if phi.map.source() != phi.source.lattice() || phi.map.target() != phi.target.lattice() {
        violations.push(MorphismViolation::ShapeMismatch);
        return MorphismValidation {
            violations,
            preimages_are_unions: false,
            injective: false,
        };
    }

    for c1 in phi.source.cones() {
        let mut has_image = false;
        for c2 in phi.target.cones() {
            if phi.maps_cone_into(c1, c2) {
                has_image = true;
                // Condition (b): f(N_sigma1) subset N_sigma2 whenever
                // f_R(sigma1) subset sigma2.
                let gens2 = phi.target.cone_subgroup_generators(c2);
                let carried = c1.indices().iter().all(|&i| {
                    let img = phi.map.apply(phi.source.ray(i)).expect("lattice sizes match");
                    phi.target.lattice().subgroup_contains(&gens2, &img)
                });
                if !carried {
                    violations.push(MorphismViolation::SubgroupNotCarried {
                        source_cone: c1.clone(),
                        target_cone: c2.clone(),
                    });
                }
            }
        }
        if !has_image {
            violations.push(MorphismViolation::ConeHasNoImage { cone: c1.clone() });
        }
    }

    let preimages_are_unions = phi
        .target
        .cones()
        .iter()
        .all(|c2| preimage_is_union_of_cones(phi, c2));

    MorphismValidation {
        violations,
        preimages_are_unions,
        injective: phi.map.is_injective(),
    }
}

/// Hypothesis (i) for a single target cone: `f^{-1}(sigma2)` intersected with
/// each maximal source cone is a face of that cone.
fn preimage_is_union_of_cones(phi: &StackyFanMorphism, c2: &ConeId) -> bool {
    let n1 = phi.source.dim();
    let n2 = phi.target.dim();
    let fm = {
        let m = phi.map.matrix();
        let mut fm = IntMatrix::zeros(n2, n1);
        for i in 0..n2 {
            for j in 0..n1 {
                fm.set(i, j, m.get(i, j).clone());
            }
        }
        fm
    };
    let gens2 = phi.target.cone_generators(c2);
    let Ok(h2) = simplicial_hrep(n2, &gens2) else {
        return false;
    };
    // Pull the target halfspaces back through f.
    let pulled: Vec<QVec> = h2
        .iter()
        .map(|h| {
            (0..n1)
                .map(|j| {
                    (0..n2)
                        .map(|i| BigRational::from(fm.get(i, j).clone()) * &h[i])
                        .sum()
                })
                .collect()
        })
        .collect();

    for c1 in phi.source.max_cones() {
        let gens1 = phi.source.cone_generators(c1);
        let Ok(mut normals) = simplicial_hrep(n1, &gens1) else {
            return false;
        };
        normals.extend(pulled.iter().cloned());
        // P = sigma1 meet f^{-1}(sigma2); find the face of sigma1 spanned by
        // the rays its generators touch, then demand that face lies in the
        // preimage too (P convex inside a union of faces means P is a face).
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for g in vrep_from_hrep(n1, &normals) {
            let q = qvec_from_int(&g);
            let Ok(Some(lambda)) = simplicial_membership(&gens1, &q) else {
                return false;
            };
            for (k, l) in lambda.iter().enumerate() {
                if !l.is_zero() {
                    touched.insert(c1.indices()[k]);
                }
            }
        }
        for &i in &touched {
            let img = qvec_from_int(&phi.apply_free(phi.source.ray_free(i)));
            if !matches!(simplicial_membership(&gens2, &img), Ok(Some(_))) {
                return false;
            }
        }
    }
    true
}

/// The cones `B_1, ..., B_w`: maximal (under inclusion) cones of the source
/// fan contained in `f^{-1}(sigma2)`, in the fan's canonical cone order.
pub fn preimage_cover(
    phi: &StackyFanMorphism,
    c2: &ConeId,
) -> Result<Vec<ConeId>, FanError> {
    if !preimage_is_union_of_cones(phi, c2) {
        return Err(FanError::NotComplete);
    }
    let inside: Vec<ConeId> = phi
        .source
        .cones()
        .iter()
        .filter(|c1| phi.maps_cone_into(c1, c2))
        .cloned()
        .collect();
    let maximal: Vec<ConeId> = inside
        .iter()
        .filter(|c| !inside.iter().any(|d| *c != d && c.is_subset_of(d)))
        .cloned()
        .collect();
    // `inside` already follows the canonical order.
    Ok(maximal)
}

/// Every ray index set that a valid simplicial fan would accept for the given
/// generators; used by tests to cross-check `vrep_from_hrep` based checks.
pub fn independent_subsets(rays: &[QVec], max_size: usize) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..rays.len()).collect();
    let mut out = Vec::new();
    for size in 0..=max_size {
        for subset in combinations(&idx, size) {
            let sub: Vec<QVec> = subset.iter().map(|&i| rays[i].clone()).collect();
            if rank(&sub) == sub.len() {
                out.push(subset);
            }
        }
    }
    out
}

/// Containment of one fan cone in another as geometric sets (used by tests).
pub fn cone_geometrically_inside(fan: &StackyFan, inner: &ConeId, outer: &ConeId) -> bool {
    let outer_gens = fan.cone_generators(outer);
    fan.cone_generators(inner)
        .iter()
        .all(|g| cone_membership(&outer_gens, g))
}

/// Dot product helper re-exported for fan consumers.
pub fn pairing(x: &[BigRational], y: &[BigRational]) -> BigRational {
    dot(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans;

    #[test]
    fn p1_is_valid_and_complete() {
        let f = fans::p1();
        assert!(f.validate().is_valid());
        assert!(f.is_complete());
    }

    #[test]
    fn p112_is_valid_and_complete() {
        let f = fans::p112();
        assert!(f.validate().is_valid());
        assert!(f.is_complete());
    }

    #[test]
    fn dependent_rays_are_reported() {
        let f = StackyFan::from_i64(
            FgAbelianGroup::free(2),
            &[&[1, 0], &[2, 0]],
            &[&[0, 1]],
        )
        .unwrap();
        let report = f.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, FanViolation::DependentRays { .. })));
    }

    #[test]
    fn overlapping_cones_are_reported() {
        // Two 2-cones overlapping in a 2-dimensional region.
        let f = StackyFan::from_i64(
            FgAbelianGroup::free(2),
            &[&[1, 0], &[0, 1], &[1, 1]],
            &[&[0, 1], &[0, 2]],
        )
        .unwrap();
        let report = f.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, FanViolation::IntersectionNotFace { .. })));

        // A fan where the extra ray sits inside another cone.
        let f = StackyFan::from_i64(
            FgAbelianGroup::free(2),
            &[&[1, 0], &[0, 1], &[-1, -1], &[3, 7]],
            &[&[0, 1], &[1, 2], &[2, 0], &[3]],
        )
        .unwrap();
        assert!(!f.validate().is_valid());
    }

    #[test]
    fn single_quadrant_is_not_complete() {
        let f = fans::affine2();
        assert!(f.validate().is_valid());
        assert!(!f.is_complete());
    }

    #[test]
    fn completeness_of_bundled_fans() {
        for (fan, complete) in [
            (fans::p1(), true),
            (fans::p2(), true),
            (fans::p1xp1(), true),
            (fans::p112(), true),
            (fans::football(), true),
            (fans::gerby_p1(), true),
            (fans::p2_subdivided(), true),
            (fans::affine2(), false),
        ] {
            assert_eq!(fan.is_complete(), complete, "{:?}", fan);
        }
    }

    #[test]
    fn rigidify_gerby_p1() {
        let f = fans::gerby_p1();
        let rig = f.rigidify();
        assert_eq!(rig, fans::p1());
        // Idempotent.
        assert_eq!(rig.rigidify(), rig);
    }

    #[test]
    fn rigidify_keeps_nonprimitive_rays() {
        let f = fans::football();
        assert_eq!(f.rigidify(), f);
        assert_eq!(f.ray_free(0), &[BigInt::from(2)]);
        assert_eq!(f.ray_primitive(0), vec![BigInt::from(1)]);
    }

    #[test]
    fn rigidify_is_identity_on_torsion_free() {
        for fan in [fans::p1(), fans::p2(), fans::p112()] {
            assert_eq!(fan.rigidify(), fan);
        }
    }

    #[test]
    fn lift_fan_charts() {
        let f = fans::p1();
        let lifted = f.lift_fan();
        assert_eq!(lifted.ambient_rank, 2);
        let chart = lifted.chart(&ConeId::new(vec![0])).unwrap();
        assert_eq!(chart.basis_indices, vec![0]);
        assert_eq!(chart.invertible_coordinates, vec![1]);
        assert_eq!(chart.weight_lattice_rank, 1);

        let f = fans::p112();
        let lifted = f.lift_fan();
        let chart = lifted.chart(&ConeId::new(vec![0, 1])).unwrap();
        assert_eq!(chart.basis_indices, vec![0, 1]);
        assert_eq!(chart.invertible_coordinates, vec![2]);

        let zero = lifted.chart(&ConeId::zero()).unwrap();
        assert!(zero.basis_indices.is_empty());
        assert_eq!(zero.weight_lattice_rank, 0);
    }

    #[test]
    fn diagonal_morphism_is_valid_with_hypotheses() {
        let phi = fans::p1_diagonal_into_p1xp1();
        let report = validate_morphism(&phi);
        assert!(report.is_morphism(), "{:?}", report.violations);
        assert!(report.preimages_are_unions);
        assert!(report.injective);
    }

    #[test]
    fn identity_morphism_is_valid() {
        let phi = StackyFanMorphism::identity(&fans::p112());
        let report = validate_morphism(&phi);
        assert!(report.supports_pullback());
    }

    #[test]
    fn zero_map_fails_injectivity() {
        let p1 = fans::p1();
        let zero = GroupHom::new(
            p1.lattice().clone(),
            p1.lattice().clone(),
            IntMatrix::zeros(1, 1),
        )
        .unwrap();
        let phi = StackyFanMorphism::new(p1.clone(), p1, zero);
        let report = validate_morphism(&phi);
        assert!(report.is_morphism(), "zero map is a morphism");
        assert!(!report.injective);
    }

    #[test]
    fn preimage_cover_diagonal() {
        let phi = fans::p1_diagonal_into_p1xp1();
        // Positive quadrant pulls back to the positive ray.
        let cover = preimage_cover(&phi, &ConeId::new(vec![0, 2])).unwrap();
        assert_eq!(cover, vec![ConeId::new(vec![0])]);
        // Zero cone pulls back to the zero cone.
        let cover = preimage_cover(&phi, &ConeId::zero()).unwrap();
        assert_eq!(cover, vec![ConeId::zero()]);
        // Mixed quadrant <e1, -e2> pulls back to the origin only.
        let cover = preimage_cover(&phi, &ConeId::new(vec![0, 3])).unwrap();
        assert_eq!(cover, vec![ConeId::zero()]);
    }

    #[test]
    fn preimage_cover_identity() {
        let fan = fans::p112();
        let phi = StackyFanMorphism::identity(&fan);
        for c in fan.cones() {
            assert_eq!(preimage_cover(&phi, c).unwrap(), vec![c.clone()]);
        }
    }

    #[test]
    fn preimage_cover_refinement() {
        let phi = fans::p2_refinement();
        // The subdivided cone <e1, e2> is covered by the two subdividing cones.
        let cover = preimage_cover(&phi, &ConeId::new(vec![0, 1])).unwrap();
        assert_eq!(cover, vec![ConeId::new(vec![0, 3]), ConeId::new(vec![1, 3])]);
        // Untouched cones pull back to themselves.
        let cover = preimage_cover(&phi, &ConeId::new(vec![1, 2])).unwrap();
        assert_eq!(cover, vec![ConeId::new(vec![1, 2])]);
    }

    #[test]
    fn preimage_cover_cones_tile_the_preimage() {
        // Sampled rational points in the preimage lie in some cover cone.
        let phi = fans::p1_diagonal_into_p1xp1();
        let report = validate_morphism(&phi);
        assert!(report.supports_pullback());
        for c2 in phi.target.cones() {
            let cover = preimage_cover(&phi, c2).unwrap();
            let gens2 = phi.target.cone_generators(c2);
            for num in -8i64..=8 {
                let x = vec![BigRational::new(BigInt::from(num), BigInt::from(4))];
                let image = vec![x[0].clone(), x[0].clone()];
                let in_preimage =
                    matches!(simplicial_membership(&gens2, &image), Ok(Some(_)));
                let in_cover = cover.iter().any(|b| phi.source.cone_contains(b, &x));
                assert_eq!(in_preimage, in_cover, "point {:?} cone {:?}", x, c2);
            }
        }
    }
}
