//! Gale duality and Cox construction data.
//!
//! From a stacky fan `(N, Sigma, beta)` one forms the dual group `DG(beta)`
//! as the cokernel of `B* + Q*`, where `0 -> Z^l -Q-> Z^{n+l} -> N -> 0` is a
//! presentation of `N` and `B` lifts `beta` through it. The Gale dual
//! `beta_dual: M~ -> DG(beta)` carries the weights of the Cox torus action;
//! the generic stabilizer is the torsion of `N`; and the irrelevant ideal is
//! generated by one squarefree monomial per maximal cone.

use crate::stackyfan::StackyFan;
use crate::zlat::{FgAbelianGroup, GroupHom, IntMatrix};
use num_bigint::BigInt;
use std::collections::BTreeSet;

/// The Gale-dual data of a stacky fan.
#[derive(Clone, Debug)]
pub struct GaleData {
    /// `DG(beta)` in invariant-factor form.
    pub dg: FgAbelianGroup,
    /// The Gale dual `beta_dual: M~ = Z^r -> DG(beta)`.
    pub beta_dual: GroupHom,
    /// The defining map `B* + Q* : (Z^{n+l})* -> M~ + (Z^l)*`.
    pub dual_presentation: GroupHom,
    /// The quotient `M~ + (Z^l)* -> DG(beta)`.
    pub projection: GroupHom,
    /// The chosen lift `B: Z^r -> Z^{n+l}`.
    pub lift: IntMatrix,
    /// The presentation map `Q: Z^l -> Z^{n+l}`.
    pub presentation: IntMatrix,
}

/// Cox construction data derived from the Gale dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxData {
    /// `G_Sigma = Hom(DG(beta), C^*)`, described by the same invariants as
    /// `DG(beta)` (torus rank = free rank, roots of unity = torsion).
    pub cox_group: FgAbelianGroup,
    /// Invariant factors of the generic stabilizer (torsion of `N`).
    pub generic_stabilizer: Vec<BigInt>,
    /// Ray-index supports of the minimal monomial generators of the
    /// irrelevant ideal, one `prod_{rho_i not in sigma} z_i` per maximal cone.
    pub irrelevant_generators: Vec<Vec<usize>>,
}

/// The canonical presentation `0 -> Z^l -Q-> Z^{n+l} -> N -> 0`:
/// `Q` has columns `a_j * e_{n+j}`.
pub fn canonical_presentation(lattice: &FgAbelianGroup) -> IntMatrix {
    lattice.relation_matrix()
}

/// The canonical lift of `beta` through the presentation: each ray element
/// `(free part, torsion part)` read as an integer vector in `Z^{n+l}` with
/// the torsion coordinates taken in `[0, a_j)`.
pub fn canonical_lift(fan: &StackyFan) -> IntMatrix {
    let g = fan.lattice().generator_count();
    let r = fan.ray_count();
    let mut b = IntMatrix::zeros(g, r);
    for j in 0..r {
        for (i, v) in fan.ray(j).iter().enumerate() {
            b.set(i, j, v.clone());
        }
    }
    b
}

/// Computes the Gale dual with a caller-supplied lift `B` of `beta`.
///
/// Any two lifts differ by `Q . H` for some `H in Hom(Z^r, Z^l)` and produce
/// the same invariant factors; the property suite checks this with
/// randomized lifts.
pub fn gale_dual_with_lift(fan: &StackyFan, lift: IntMatrix) -> GaleData {
    let q = canonical_presentation(fan.lattice());
    let r = fan.ray_count();
    let l = q.cols();

    // B* + Q* : (Z^{n+l})* -> M~ + (Z^l)*, as a stacked transpose.
    let bt = lift.transpose();
    let qt = q.transpose();
    let mut stacked = IntMatrix::zeros(r + l, lift.rows());
    for i in 0..r {
        for j in 0..lift.rows() {
            stacked.set(i, j, bt.get(i, j).clone());
        }
    }
    for i in 0..l {
        for j in 0..lift.rows() {
            stacked.set(r + i, j, qt.get(i, j).clone());
        }
    }
    let dual_presentation = GroupHom::new(
        FgAbelianGroup::free(lift.rows()),
        FgAbelianGroup::free(r + l),
        stacked,
    )
    .expect("free groups");
    let (dg, projection) = dual_presentation.cokernel();

    // beta_dual = projection restricted along the inclusion M~ -> M~ + (Z^l)*.
    let mut incl = IntMatrix::zeros(r + l, r);
    for i in 0..r {
        incl.set(i, i, BigInt::from(1));
    }
    let incl_hom =
        GroupHom::new(FgAbelianGroup::free(r), FgAbelianGroup::free(r + l), incl).expect("free");
    let beta_dual = projection.compose(&incl_hom).expect("composable");

    GaleData {
        dg,
        beta_dual,
        dual_presentation,
        projection,
        lift,
        presentation: q,
    }
}

/// The Gale dual of the fan's `beta`, with the canonical choice of lift.
pub fn gale_dual(fan: &StackyFan) -> GaleData {
    gale_dual_with_lift(fan, canonical_lift(fan))
}

/// Invariant factors of the generic stabilizer `G = prod mu_{a_j}`.
pub fn generic_stabilizer(fan: &StackyFan) -> Vec<BigInt> {
    fan.lattice().invariants().to_vec()
}

/// Minimal monomial generators of the irrelevant ideal: the complement of
/// each maximal cone's ray set, with redundant (superset) generators removed.
pub fn irrelevant_ideal(fan: &StackyFan) -> Vec<Vec<usize>> {
    let r = fan.ray_count();
    let supports: BTreeSet<Vec<usize>> = fan
        .max_cones()
        .iter()
        .map(|c| (0..r).filter(|i| !c.contains_index(*i)).collect())
        .collect();
    supports
        .iter()
        .filter(|s| !supports.iter().any(|t| t != *s && t.iter().all(|i| s.contains(i))))
        .cloned()
        .collect()
}

/// Bundled Cox construction data.
pub fn cox_data(fan: &StackyFan) -> CoxData {
    let gale = gale_dual(fan);
    CoxData {
        cox_group: gale.dg.clone(),
        generic_stabilizer: generic_stabilizer(fan),
        irrelevant_generators: irrelevant_ideal(fan),
    }
}

impl GaleData {
    /// Exactness of the defining diagram: the quotient projection composed
    /// with `B* + Q*` vanishes.
    pub fn is_exact(&self) -> bool {
        self.projection
            .compose(&self.dual_presentation)
            .map(|c| c.is_zero())
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans;
    use crate::zlat::kernel_basis;
    use num_traits::Zero;

    /// Kernel-basis oracle for the weights: when `N` is free and `DG` is
    /// free of rank 1, the weight vector is the primitive kernel generator
    /// of `beta`.
    fn weight_oracle(fan: &StackyFan) -> Vec<BigInt> {
        let beta = fan.beta();
        let kernel = kernel_basis(beta.matrix());
        assert_eq!(kernel.len(), 1);
        kernel.into_iter().next().unwrap()
    }

    fn weights_up_to_sign(gale: &GaleData) -> Vec<BigInt> {
        assert_eq!(gale.dg.free_rank(), 1);
        assert!(gale.dg.invariants().is_empty());
        let m = gale.beta_dual.matrix();
        let mut w: Vec<BigInt> = (0..m.cols()).map(|j| m.get(0, j).clone()).collect();
        if let Some(first) = w.iter().find(|x| !x.is_zero()) {
            if first < &&BigInt::zero() {
                w = w.iter().map(|x| -x).collect();
            }
        }
        w
    }

    #[test]
    fn p2_weights() {
        let fan = fans::p2();
        let gale = gale_dual(&fan);
        assert!(gale.is_exact());
        assert_eq!(weights_up_to_sign(&gale), weight_oracle(&fan));
        assert_eq!(weights_up_to_sign(&gale), vec![BigInt::from(1); 3]);
    }

    #[test]
    fn p112_weights() {
        let fan = fans::p112();
        let gale = gale_dual(&fan);
        assert_eq!(weights_up_to_sign(&gale), weight_oracle(&fan));
        assert_eq!(
            weights_up_to_sign(&gale),
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)]
        );
    }

    #[test]
    fn football_weights() {
        let fan = fans::football();
        let gale = gale_dual(&fan);
        assert_eq!(weights_up_to_sign(&gale), weight_oracle(&fan));
        assert_eq!(
            weights_up_to_sign(&gale),
            vec![BigInt::from(1), BigInt::from(2)]
        );
    }

    #[test]
    fn gerby_p1_dual_group() {
        let fan = fans::gerby_p1();
        let gale = gale_dual(&fan);
        assert!(gale.is_exact());
        assert_eq!(gale.dg.free_rank(), 1);
        assert!(gale.dg.invariants().is_empty());
        // The C*-action on the gerbe has doubled weights (2, 2) up to sign.
        assert_eq!(
            weights_up_to_sign(&gale),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        assert_eq!(generic_stabilizer(&fan), vec![BigInt::from(2)]);
    }

    #[test]
    fn stabilizer_invariants() {
        assert!(generic_stabilizer(&fans::p2()).is_empty());
        let fan = StackyFan::from_i64(
            FgAbelianGroup::from_u64(1, &[2, 4]),
            &[&[1, 0, 0], &[-1, 0, 0]],
            &[&[0], &[1]],
        )
        .unwrap();
        assert_eq!(
            generic_stabilizer(&fan),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn irrelevant_ideal_examples() {
        assert_eq!(irrelevant_ideal(&fans::p2()), vec![vec![0], vec![1], vec![2]]);
        let gens = irrelevant_ideal(&fans::p1xp1());
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|g| g.len() == 2));
        // Single maximal cone covering all rays: unit ideal.
        assert_eq!(irrelevant_ideal(&fans::affine2()), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn dg_free_rank_is_r_minus_n() {
        for (name, fan) in fans::complete_fans() {
            let gale = gale_dual(&fan);
            assert_eq!(
                gale.dg.free_rank(),
                fan.ray_count() - fan.dim(),
                "free rank of DG for {name}"
            );
        }
    }

    #[test]
    fn beta_dual_kills_beta_star() {
        // beta_dual . beta* = 0, where beta*: M -> M~ is the transpose of
        // the free part of beta.
        for (name, fan) in fans::complete_fans() {
            let gale = gale_dual(&fan);
            let n = fan.dim();
            let r = fan.ray_count();
            let mut beta_star = IntMatrix::zeros(r, n);
            for j in 0..r {
                for i in 0..n {
                    beta_star.set(j, i, fan.ray_free(j)[i].clone());
                }
            }
            let beta_star_hom =
                GroupHom::new(FgAbelianGroup::free(n), FgAbelianGroup::free(r), beta_star)
                    .unwrap();
            let comp = gale.beta_dual.compose(&beta_star_hom).unwrap();
            assert!(comp.is_zero(), "Gale complex exactness for {name}");
        }
    }

    #[test]
    fn cokernel_of_beta_dual_is_torsion_of_n() {
        // Exactness at DG: coker(beta_dual) = Ext^1(N, Z), whose invariant
        // factors are those of N_tor. For the gerby P^1 the weights are
        // (2,2), so the cokernel is Z/2 = N_tor; for torsion-free N the
        // Gale dual is onto.
        for (name, fan) in fans::complete_fans() {
            let gale = gale_dual(&fan);
            let (coker, _) = gale.beta_dual.cokernel();
            assert_eq!(coker.free_rank(), 0, "finite cokernel for {name}");
            assert_eq!(
                coker.invariants(),
                fan.lattice().invariants(),
                "coker(beta_dual) = N_tor for {name}"
            );
        }
    }

    #[test]
    fn rigidification_preserves_dg_free_rank() {
        for (name, fan) in fans::complete_fans() {
            let a = gale_dual(&fan);
            let b = gale_dual(&fan.rigidify());
            assert_eq!(a.dg.free_rank(), b.dg.free_rank(), "{name}");
        }
    }

    #[test]
    fn lift_independence_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6a1e);
        for fan in [fans::gerby_p1(), fans::p112()] {
            let q = canonical_presentation(fan.lattice());
            let base = canonical_lift(&fan);
            let reference = gale_dual(&fan);
            for _ in 0..50 {
                // B' = B + Q * H for random H in Hom(Z^r, Z^l).
                let mut h = IntMatrix::zeros(q.cols(), fan.ray_count());
                for i in 0..h.rows() {
                    for j in 0..h.cols() {
                        h.set(i, j, BigInt::from(rng.gen_range(-5i64..=5)));
                    }
                }
                let qh = q.mul(&h);
                let mut lifted = base.clone();
                for i in 0..lifted.rows() {
                    for j in 0..lifted.cols() {
                        lifted.set(i, j, lifted.get(i, j) + qh.get(i, j));
                    }
                }
                let alt = gale_dual_with_lift(&fan, lifted);
                assert_eq!(alt.dg.free_rank(), reference.dg.free_rank());
                assert_eq!(alt.dg.invariants(), reference.dg.invariants());
            }
        }
    }
}
