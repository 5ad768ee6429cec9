//! Smith normal form with full transform tracking.
//!
//! The elimination runs on `i128` first and restarts in `BigInt` as soon as
//! any intermediate value would overflow, so results are always exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal with a
/// divisibility chain `d_1 | d_2 | ... | d_r`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub s: IntMatrix,
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// Truncated quotient; callers guarantee a nonzero divisor.
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        x % self == 0
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        Zero::is_zero(&(x % self))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Dense<T> {
    rows: usize,
    cols: usize,
    d: Vec<T>,
}

impl<T: Scalar> Dense<T> {
    fn identity(n: usize) -> Self {
        let mut d = vec![T::zero(); n * n];
        for i in 0..n {
            d[i * n + i] = T::one();
        }
        Dense { rows: n, cols: n, d }
    }
    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.d[i * self.cols + j]
    }
    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        for j in 0..self.cols {
            let b = self.d[t * self.cols + j].clone();
            if !b.is_zero() {
                let v = self.d[i * self.cols + j].sub_mul(q, &b)?;
                self.d[i * self.cols + j] = v;
            }
        }
        Some(())
    }
    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        for i in 0..self.rows {
            let b = self.d[i * self.cols + t].clone();
            if !b.is_zero() {
                let v = self.d[i * self.cols + j].sub_mul(q, &b)?;
                self.d[i * self.cols + j] = v;
            }
        }
        Some(())
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.d.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.d.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
    fn neg_row(&mut self, i: usize) -> Option<()> {
        for j in 0..self.cols {
            let v = self.d[i * self.cols + j].neg()?;
            self.d[i * self.cols + j] = v;
        }
        Some(())
    }
    fn neg_col(&mut self, j: usize) -> Option<()> {
        for i in 0..self.rows {
            let v = self.d[i * self.cols + j].neg()?;
            self.d[i * self.cols + j] = v;
        }
        Some(())
    }
    fn to_int_matrix(&self) -> IntMatrix {
        let data = self.d.iter().map(|x| x.to_big()).collect();
        IntMatrix::from_flat(self.rows, self.cols, data).expect("shape preserved")
    }
}

struct Work<T> {
    a: Dense<T>,
    u: Dense<T>,
    u_inv: Dense<T>,
    v: Dense<T>,
    v_inv: Dense<T>,
}

impl<T: Scalar> Work<T> {
    // Each elementary operation is mirrored on the transforms and their inverses.
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        self.a.row_sub(i, t, q)?;
        self.u.row_sub(i, t, q)?;
        // U^{-1} gains q * column i on column t
        let mq = q.neg()?;
        self.u_inv.col_sub(t, i, &mq)
    }
    fn row_add(&mut self, t: usize, i: usize) -> Option<()> {
        let m1 = T::one().neg()?;
        self.a.row_sub(t, i, &m1)?;
        self.u.row_sub(t, i, &m1)?;
        self.u_inv.col_sub(i, t, &T::one())
    }
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        self.a.col_sub(j, t, q)?;
        self.v.col_sub(j, t, q)?;
        let mq = q.neg()?;
        self.v_inv.row_sub(t, j, &mq)
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }
    fn neg_row(&mut self, i: usize) -> Option<()> {
        self.a.neg_row(i)?;
        self.u.neg_row(i)?;
        self.u_inv.neg_col(i)
    }
}

fn run<T: Scalar>(a: Dense<T>) -> Option<Work<T>> {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work { a, u: Dense::identity(m), u_inv: Dense::identity(m), v: Dense::identity(n), v_inv: Dense::identity(n) };
    for t in 0..m.min(n) {
        // Minimal-magnitude pivot in the trailing block keeps entries small.
        let mut best: Option<(usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                let x = w.a.at(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs_lt(w.a.at(bi, bj))) {
                    best = Some((i, j));
                    if x.is_unit() {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !w.a.at(i, t).is_zero() {
                    let q = w.a.at(i, t).quot(w.a.at(t, t));
                    if !q.is_zero() {
                        w.row_sub(i, t, &q)?;
                    }
                    if !w.a.at(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !w.a.at(t, j).is_zero() {
                    let q = w.a.at(t, j).quot(w.a.at(t, t));
                    if !q.is_zero() {
                        w.col_sub(j, t, &q)?;
                    }
                    if !w.a.at(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; promote it.
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = w.a.at(i, t);
                    if !x.is_zero() && x.abs_lt(w.a.at(best.0, best.1)) {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = w.a.at(t, j);
                    if !x.is_zero() && x.abs_lt(w.a.at(best.0, best.1)) {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a.at(t, t).clone();
            if pivot.is_unit() {
                break;
            }
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !pivot.divides(w.a.at(i, j)) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => w.row_add(t, i)?,
                None => break,
            }
        }
        if w.a.at(t, t).is_negative() {
            w.neg_row(t)?;
        }
    }
    Some(w)
}

fn finish<T: Scalar>(w: Work<T>) -> SmithDecomposition {
    let k = w.a.rows.min(w.a.cols);
    let divisors = (0..k).map(|i| w.a.at(i, i).to_big()).take_while(|x| !Zero::is_zero(x)).collect();
    SmithDecomposition {
        u: w.u.to_int_matrix(),
        u_inv: w.u_inv.to_int_matrix(),
        v: w.v.to_int_matrix(),
        v_inv: w.v_inv.to_int_matrix(),
        s: w.a.to_int_matrix(),
        divisors,
    }
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    // Keep the fast path for entries well inside i128 so the first products cannot overflow.
    let small: Option<Vec<i128>> = a
        .data()
        .iter()
        .map(|x| x.to_i64().map(|v| v as i128))
        .collect();
    if let Some(d) = small {
        if let Some(w) = run(Dense { rows: a.rows(), cols: a.cols(), d }) {
            return finish(w);
        }
    }
    let w = run(Dense { rows: a.rows(), cols: a.cols(), d: a.data().to_vec() })
        .expect("BigInt elimination cannot overflow");
    finish(w)
}

/// Basis of the integer kernel `{x : A x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    snf.v.select_cols(&idx)
}

/// Solves `A x = b` over the integers, returning one solution if any exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b).expect("shape checked by caller");
    let r = snf.rank();
    if ub[r..].iter().any(|x| !Zero::is_zero(x)) {
        return None;
    }
    let mut z = vec![<BigInt as Zero>::zero(); a.cols()];
    for i in 0..r {
        let d = &snf.divisors[i];
        if !Zero::is_zero(&(&ub[i] % d)) {
            return None;
        }
        z[i] = &ub[i] / d;
    }
    Some(snf.v.mul_vec(&z).expect("shape"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        let prod = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.s);
        let m = a.rows();
        let n = a.cols();
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(n));
        for w in s.divisors.windows(2) {
            assert!(Zero::is_zero(&(&w[1] % &w[0])));
        }
        s
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![2, 4], vec![1, 2]]));
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        let sign = if c[0] < <BigInt as Zero>::zero() { -1 } else { 1 };
        assert_eq!(c.iter().map(|x| x * sign).collect::<Vec<_>>(), vec![BigInt::from(2), BigInt::from(-1)]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX;
        let a = IntMatrix::from_rows(&[vec![big, big - 1, 3], vec![big - 2, big, 5], vec![7, big, big - 9]]);
        check(&a);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.divisors.is_empty());
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        assert!(solve_integer(&a, &[BigInt::from(3)]).is_none());
        assert_eq!(solve_integer(&a, &[BigInt::from(4)]).unwrap(), vec![BigInt::from(2)]);
    }
}
