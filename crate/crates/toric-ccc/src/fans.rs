//! The bundled example fans and morphisms used by the guide, the test
//! suites, and the `fans/` fixture files.

use crate::stackyfan::{StackyFan, StackyFanMorphism};
use crate::zlat::{FgAbelianGroup, GroupHom, IntMatrix};

/// The projective line: rays `1`, `-1` in `Z`.
pub fn p1() -> StackyFan {
    StackyFan::from_i64(FgAbelianGroup::free(1), &[&[1], &[-1]], &[&[0], &[1]]).unwrap()
}

/// The projective plane: rays `(1,0)`, `(0,1)`, `(-1,-1)`.
pub fn p2() -> StackyFan {
    StackyFan::from_i64(
        FgAbelianGroup::free(2),
        &[&[1, 0], &[0, 1], &[-1, -1]],
        &[&[0, 1], &[1, 2], &[2, 0]],
    )
    .unwrap()
}

/// `P^1 x P^1`: rays `e1, -e1, e2, -e2`, quadrant cones.
pub fn p1xp1() -> StackyFan {
    StackyFan::from_i64(
        FgAbelianGroup::free(2),
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
        &[&[0, 2], &[2, 1], &[1, 3], &[3, 0]],
    )
    .unwrap()
}

/// The weighted projective plane `P(1,1,2)` as a stack: rays `(1,0)`,
/// `(0,1)`, `(-1,-2)`.
pub fn p112() -> StackyFan {
    StackyFan::from_i64(
        FgAbelianGroup::free(2),
        &[&[1, 0], &[0, 1], &[-1, -2]],
        &[&[0, 1], &[1, 2], &[2, 0]],
    )
    .unwrap()
}

/// The football `P(2,1)`: rays `2`, `-1` in `Z` (the first one deliberately
/// non-primitive).
pub fn football() -> StackyFan {
    StackyFan::from_i64(FgAbelianGroup::free(1), &[&[2], &[-1]], &[&[0], &[1]]).unwrap()
}

/// The gerby projective line: `N = Z + Z/2`, rays `(1, 1bar)`, `(-1, 0bar)`.
pub fn gerby_p1() -> StackyFan {
    StackyFan::from_i64(
        FgAbelianGroup::from_u64(1, &[2]),
        &[&[1, 1], &[-1, 0]],
        &[&[0], &[1]],
    )
    .unwrap()
}

/// The affine plane: a single quadrant cone (not complete).
pub fn affine2() -> StackyFan {
    StackyFan::from_i64(FgAbelianGroup::free(2), &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap()
}

/// `P^2` with the cone `<e1, e2>` subdivided by the ray `e1 + e2`.
pub fn p2_subdivided() -> StackyFan {
    StackyFan::from_i64(
        FgAbelianGroup::free(2),
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
        &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
    )
    .unwrap()
}

/// The diagonal morphism `P^1 -> P^1 x P^1`, `x -> (x, x)`.
pub fn p1_diagonal_into_p1xp1() -> StackyFanMorphism {
    let source = p1();
    let target = p1xp1();
    let map = GroupHom::new(
        source.lattice().clone(),
        target.lattice().clone(),
        IntMatrix::from_i64(&[&[1], &[1]]),
    )
    .unwrap();
    StackyFanMorphism::new(source, target, map)
}

/// The refinement morphism from the subdivided `P^2` fan to `P^2`, with the
/// identity on `N`.
pub fn p2_refinement() -> StackyFanMorphism {
    let source = p2_subdivided();
    let target = p2();
    let map = GroupHom::new(
        source.lattice().clone(),
        target.lattice().clone(),
        IntMatrix::identity(2),
    )
    .unwrap();
    StackyFanMorphism::new(source, target, map)
}

/// All bundled complete fans with a short label, in a fixed order.
pub fn complete_fans() -> Vec<(&'static str, StackyFan)> {
    vec![
        ("p1", p1()),
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("p112", p112()),
        ("football", football()),
        ("gerby-p1", gerby_p1()),
    ]
}

/// The bundled 2-dimensional complete fans (used by grid-sampling suites).
pub fn complete_2d_fans() -> Vec<(&'static str, StackyFan)> {
    vec![
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("p112", p112()),
        ("p2-subdivided", p2_subdivided()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stackyfan::validate_morphism;

    #[test]
    fn all_bundled_fans_validate() {
        for (name, fan) in complete_fans() {
            assert!(fan.validate().is_valid(), "{name}");
        }
        assert!(affine2().validate().is_valid());
        assert!(p2_subdivided().validate().is_valid());
    }

    #[test]
    fn bundled_morphisms_support_pullback() {
        for phi in [p1_diagonal_into_p1xp1(), p2_refinement()] {
            assert!(validate_morphism(&phi).supports_pullback());
        }
    }
}
