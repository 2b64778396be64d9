//! Exact integer and rational linear algebra: Smith normal form, finitely
//! generated abelian groups, and rational polyhedral cones.
//!
//! Every decision in this crate (cone containment, group isomorphism type,
//! lattice-point membership) reduces to exact computations here. Floating
//! point never appears.

mod cone;
mod group;
mod matrix;

pub use cone::{
    combinations, cone_membership, dot, dual_cone, kernel, primitive_direction, qvec_from_i64,
    qvec_from_int, rank, rref, simplicial_hrep, simplicial_membership, simplicial_relint, solve,
    vrep_from_hrep, ConeError, QVec, RationalCone,
};
pub use group::{FgAbelianGroup, GroupError, GroupHom};
pub use matrix::{
    kernel_basis, primitive_vector, smith_normal_form, solve_integer, IntMatrix,
    SmithDecomposition,
};
