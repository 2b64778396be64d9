//! Finitely generated abelian groups in invariant-factor form, and their
//! homomorphisms.
//!
//! A group is `Z^free_rank + Z/a_1 + ... + Z/a_l` with `a_1 | a_2 | ...` and
//! every `a_j >= 2`. Elements are coordinate vectors against the generator
//! tuple (free generators first, then torsion generators); torsion
//! coordinates are kept reduced to `[0, a_j)`.

use super::matrix::{kernel_basis, smith_normal_form, solve_integer, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invariant factors must satisfy a_1 | a_2 | ... with every a_j >= 2, got {0}")]
    BadInvariants(String),
    #[error("element has {got} coordinates, group has {want} generators")]
    BadElementLength { got: usize, want: usize },
    #[error(
        "matrix does not respect torsion: generator {generator} of order {order} maps to an element not killed by {order}"
    )]
    TorsionViolation { generator: usize, order: BigInt },
    #[error("homomorphism shape mismatch: matrix is {mrows}x{mcols}, expected {trows}x{tcols}")]
    ShapeMismatch {
        mrows: usize,
        mcols: usize,
        trows: usize,
        tcols: usize,
    },
}

/// A finitely generated abelian group `Z^free_rank + sum Z/a_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariants: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            invariants: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, invariants: Vec<BigInt>) -> Result<Self, GroupError> {
        for w in invariants.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(GroupError::BadInvariants(format!("{:?}", invariants)));
            }
        }
        if invariants.iter().any(|a| *a < BigInt::from(2)) {
            return Err(GroupError::BadInvariants(format!("{:?}", invariants)));
        }
        Ok(FgAbelianGroup {
            free_rank,
            invariants,
        })
    }

    pub fn from_u64(free_rank: usize, invariants: &[u64]) -> Self {
        Self::new(free_rank, invariants.iter().map(|&a| BigInt::from(a)).collect()).unwrap()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariants.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_count() == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    /// The torsion-free quotient `Z^free_rank`.
    pub fn free_quotient(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.free_rank)
    }

    /// Canonical form of an element: torsion coordinates reduced mod `a_j`.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>, GroupError> {
        if x.len() != self.generator_count() {
            return Err(GroupError::BadElementLength {
                got: x.len(),
                want: self.generator_count(),
            });
        }
        let mut out = x.to_vec();
        for (j, a) in self.invariants.iter().enumerate() {
            out[self.free_rank + j] = out[self.free_rank + j].mod_floor(a);
        }
        Ok(out)
    }

    /// The defining relation matrix `q`: columns `a_j * e_{free_rank + j}`,
    /// so the group is `Z^{generator_count} / im(q)`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let g = self.generator_count();
        let l = self.invariants.len();
        let mut q = IntMatrix::zeros(g, l);
        for (j, a) in self.invariants.iter().enumerate() {
            q.set(self.free_rank + j, j, a.clone());
        }
        q
    }

    /// Does `x` lie in the subgroup generated by `gens`?
    pub fn subgroup_contains(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> bool {
        let g = self.generator_count();
        assert!(gens.iter().all(|v| v.len() == g));
        assert_eq!(x.len(), g);
        let mut cols: Vec<Vec<BigInt>> = gens.to_vec();
        let rel = self.relation_matrix();
        for j in 0..rel.cols() {
            cols.push(rel.col(j));
        }
        let mut m = IntMatrix::zeros(g, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        solve_integer(&m, x).is_some()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{}", n)),
        }
        for a in &self.invariants {
            parts.push(format!("Z/{}", a));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A homomorphism between finitely generated abelian groups, as a matrix on
/// the chosen generator tuples: `f(x) = matrix * x` reduced in the target.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Builds a homomorphism, checking that torsion generators map to
    /// elements of compatible order.
    pub fn new(
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, GroupError> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(GroupError::ShapeMismatch {
                mrows: matrix.rows(),
                mcols: matrix.cols(),
                trows: target.generator_count(),
                tcols: source.generator_count(),
            });
        }
        for (j, a) in source.invariants.iter().enumerate() {
            let col = source.free_rank + j;
            // a * f(gen) must vanish in the target.
            for i in 0..target.free_rank {
                if !matrix.get(i, col).is_zero() {
                    return Err(GroupError::TorsionViolation {
                        generator: col,
                        order: a.clone(),
                    });
                }
            }
            for (k, b) in target.invariants.iter().enumerate() {
                let row = target.free_rank + k;
                if !(a * matrix.get(row, col)).mod_floor(b).is_zero() {
                    return Err(GroupError::TorsionViolation {
                        generator: col,
                        order: a.clone(),
                    });
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn identity(group: &FgAbelianGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.generator_count()),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>, GroupError> {
        if x.len() != self.source.generator_count() {
            return Err(GroupError::BadElementLength {
                got: x.len(),
                want: self.source.generator_count(),
            });
        }
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        GroupHom::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        // Zero as a map: every generator image reduces to 0.
        (0..self.matrix.cols()).all(|j| {
            self.target
                .reduce(&self.matrix.col(j))
                .expect("column length matches target")
                .iter()
                .all(Zero::is_zero)
        })
    }

    /// Whether the kernel is trivial.
    pub fn is_injective(&self) -> bool {
        // x in ker(f) iff matrix*x lies in the target relation lattice. The
        // lattice of such x is spanned by projections of ker([matrix | q2]);
        // f is injective iff that lattice is contained in im(q1).
        let q2 = self.target.relation_matrix();
        let stacked = self.matrix.hstack(&q2);
        let g1 = self.source.generator_count();
        for k in kernel_basis(&stacked) {
            let x = &k[..g1];
            for i in 0..self.source.free_rank {
                if !x[i].is_zero() {
                    return false;
                }
            }
            for (j, a) in self.source.invariants.iter().enumerate() {
                if !x[self.source.free_rank + j].mod_floor(a).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Cokernel: the quotient group in invariant-factor form together with
    /// the projection from the target.
    pub fn cokernel(&self) -> (FgAbelianGroup, GroupHom) {
        let gt = self.target.generator_count();
        let stacked = self.matrix.hstack(&self.target.relation_matrix());
        let snf = smith_normal_form(&stacked);

        // coker = Z^gt / im(stacked); in the basis given by u_inv the image
        // lattice is spanned by s, so the quotient reads off the diagonal.
        let mut invariants = Vec::new();
        let mut torsion_rows = Vec::new();
        for i in 0..snf.rank {
            let d = snf.s.get(i, i);
            if !d.abs().is_one() {
                invariants.push(d.abs());
                torsion_rows.push(i);
            }
        }
        let free_rows: Vec<usize> = (snf.rank..gt).collect();
        let group = FgAbelianGroup::new(free_rows.len(), invariants).expect("snf chain");

        let mut proj = IntMatrix::zeros(group.generator_count(), gt);
        for (out_row, &i) in free_rows.iter().chain(torsion_rows.iter()).enumerate() {
            // Free generators are listed first in the quotient group; the
            // iterator above visits free rows first, matching that layout.
            for j in 0..gt {
                proj.set(out_row, j, snf.u_inv.get(i, j).clone());
            }
        }
        let projection =
            GroupHom::new(self.target.clone(), group.clone(), proj).expect("projection respects torsion");
        (group, projection)
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom {{ {} -> {}, matrix: {:?} }}",
            self.source, self.target, self.matrix
        )
    }
}
