//! Dense integer matrices with exact normal-form algorithms.
//!
//! Everything here works over arbitrary-precision integers. The central
//! routine is [`smith_normal_form`], which drives cokernels, integer kernels
//! and integer linear solving throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A dense `rows x cols` integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from machine integers, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.extend_from_slice(other.row(i));
            rows.push(row);
        }
        IntMatrix::from_rows(rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `a = u * s * v` with `u`, `v` unimodular
/// and `s` diagonal satisfying the divisibility chain.
///
/// The inverses are tracked during elimination so callers that need the
/// change-of-basis in the other direction (cokernels, kernels) get it for free.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries of `s` up to the rank (all nonzero).
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form: returns `(u, s, v)` with `a = u * s * v`, `u` and `v`
/// unimodular and `s = diag(d_1, ..., d_r, 0, ...)` with `d_i | d_{i+1}`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op on s is E*s; to preserve a = u*s*v we apply u <- u*E^{-1},
    // u_inv <- E*u_inv. Column ops mirror this on the right.
    fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..s.cols() {
            let tmp = s.get(i, c).clone();
            s.set(i, c, s.get(j, c).clone());
            s.set(j, c, tmp);
        }
        for c in 0..u_inv.cols() {
            let tmp = u_inv.get(i, c).clone();
            u_inv.set(i, c, u_inv.get(j, c).clone());
            u_inv.set(j, c, tmp);
        }
        for r in 0..u.rows() {
            let tmp = u.get(r, i).clone();
            u.set(r, i, u.get(r, j).clone());
            u.set(r, j, tmp);
        }
    }

    fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..s.rows() {
            let tmp = s.get(r, i).clone();
            s.set(r, i, s.get(r, j).clone());
            s.set(r, j, tmp);
        }
        for r in 0..v_inv.rows() {
            let tmp = v_inv.get(r, i).clone();
            v_inv.set(r, i, v_inv.get(r, j).clone());
            v_inv.set(r, j, tmp);
        }
        for c in 0..v.cols() {
            let tmp = v.get(i, c).clone();
            v.set(i, c, v.get(j, c).clone());
            v.set(j, c, tmp);
        }
    }

    // row_j += k * row_i
    fn add_row(
        s: &mut IntMatrix,
        u: &mut IntMatrix,
        u_inv: &mut IntMatrix,
        j: usize,
        i: usize,
        k: &BigInt,
    ) {
        for c in 0..s.cols() {
            let val = s.get(j, c) + k * s.get(i, c);
            s.set(j, c, val);
        }
        for c in 0..u_inv.cols() {
            let val = u_inv.get(j, c) + k * u_inv.get(i, c);
            u_inv.set(j, c, val);
        }
        // u <- u * E^{-1}: col_i -= k * col_j
        for r in 0..u.rows() {
            let val = u.get(r, i) - k * u.get(r, j);
            u.set(r, i, val);
        }
    }

    // col_j += k * col_i
    fn add_col(
        s: &mut IntMatrix,
        v: &mut IntMatrix,
        v_inv: &mut IntMatrix,
        j: usize,
        i: usize,
        k: &BigInt,
    ) {
        for r in 0..s.rows() {
            let val = s.get(r, j) + k * s.get(r, i);
            s.set(r, j, val);
        }
        for r in 0..v_inv.rows() {
            let val = v_inv.get(r, j) + k * v_inv.get(r, i);
            v_inv.set(r, j, val);
        }
        // v <- E^{-1} * v: row_i -= k * row_j
        for c in 0..v.cols() {
            let val = v.get(i, c) - k * v.get(j, c);
            v.set(i, c, val);
        }
    }

    fn negate_row(s: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize) {
        for c in 0..s.cols() {
            let val = -s.get(i, c);
            s.set(i, c, val);
        }
        for c in 0..u_inv.cols() {
            let val = -u_inv.get(i, c);
            u_inv.set(i, c, val);
        }
        for r in 0..u.rows() {
            let val = -u.get(r, i);
            u.set(r, i, val);
        }
    }

    let mut k = 0;
    let dim = rows.min(cols);
    while k < dim {
        // Pivot: smallest nonzero |entry| in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !s.get(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| s.get(i, j).abs() < s.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut s, &mut u, &mut u_inv, k, pi);
        swap_cols(&mut s, &mut v, &mut v_inv, k, pj);

        // Clear row and column k; repeat because reductions can refill.
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if !s.get(i, k).is_zero() {
                    let q = div_nearest(s.get(i, k), s.get(k, k));
                    if !q.is_zero() {
                        add_row(&mut s, &mut u, &mut u_inv, i, k, &(-q));
                    }
                    if !s.get(i, k).is_zero() {
                        // Remainder smaller than pivot: swap it up and restart.
                        swap_rows(&mut s, &mut u, &mut u_inv, k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !s.get(k, j).is_zero() {
                    let q = div_nearest(s.get(k, j), s.get(k, k));
                    if !q.is_zero() {
                        add_col(&mut s, &mut v, &mut v_inv, j, k, &(-q));
                    }
                    if !s.get(k, j).is_zero() {
                        swap_cols(&mut s, &mut v, &mut v_inv, k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (k + 1..rows).all(|i| s.get(i, k).is_zero())
                && (k + 1..cols).all(|j| s.get(k, j).is_zero())
            {
                break;
            }
        }

        // Pivot must divide the rest of the submatrix for the chain to hold.
        let mut fixed = true;
        'check: for i in k + 1..rows {
            for j in k + 1..cols {
                if !s.get(i, j).mod_floor(s.get(k, k)).is_zero() {
                    add_row(&mut s, &mut u, &mut u_inv, k, i, &BigInt::one());
                    fixed = false;
                    break 'check;
                }
            }
        }
        if fixed {
            if s.get(k, k).is_negative() {
                negate_row(&mut s, &mut u, &mut u_inv, k);
            }
            k += 1;
        }
    }

    let rank = (0..dim).take_while(|&i| !s.get(i, i).is_zero()).count();
    debug_assert!(u.mul(&u_inv).eq(&IntMatrix::identity(rows)));
    debug_assert!(v.mul(&v_inv).eq(&IntMatrix::identity(cols)));
    debug_assert!(u.mul(&s).mul(&v).eq(a));
    SmithDecomposition {
        u,
        s,
        v,
        u_inv,
        v_inv,
        rank,
    }
}

/// Quotient rounding to nearest, so remainders satisfy |r| <= |b|/2.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (a.sign() == b.sign()) || a.is_zero() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// A basis of the saturated lattice `ker(a)` in `Z^cols`.
///
/// The vectors are primitive, and the sign of each is normalized so the first
/// nonzero coordinate is positive.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let mut basis = Vec::new();
    for j in snf.rank..a.cols() {
        let mut col = snf.v_inv.col(j);
        if let Some(first) = col.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut col {
                    *x = -&*x;
                }
            }
        }
        basis.push(col);
    }
    basis
}

/// Solves `a * x = b` over the integers. Returns one solution when consistent.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    // a x = b  <=>  s (v x) = u_inv b.
    let c = snf.u_inv.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < snf.rank {
            let d = snf.s.get(i, i);
            let (q, r) = c[i].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(snf.v_inv.mul_vec(&y))
}

/// Divides out the gcd of the coordinates. The zero vector is returned as-is.
pub fn primitive_vector(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}
