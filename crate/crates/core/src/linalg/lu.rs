// SPDX-License-Identifier: Apache-2.0

//! LU factorization with partial pivoting.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::Matrix;
use crate::scalar::Real;

pub struct Lu<T: Real> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    sign: T,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax.is_zero() {
                singular = true;
                continue;
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Self { lu, perm, sign, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> Complex<T> {
        if self.singular {
            return Complex::zero();
        }
        let n = self.lu.rows();
        (0..n).fold(Complex::new(self.sign, T::zero()), |acc, i| acc * self.lu[(i, i)])
    }

    /// Solves `A X = B`; `None` when `A` is exactly singular.
    pub fn solve(&self, b: &Matrix<T>) -> Option<Matrix<T>> {
        if self.singular {
            return None;
        }
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "rhs row count");
        let m = b.cols();
        let mut x = Matrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for col in 0..m {
            for i in 0..n {
                let mut s = x[(i, col)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, col)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = s / self.lu[(i, i)];
            }
        }
        Some(x)
    }
}

impl<T: Real> Matrix<T> {
    pub fn det(&self) -> Complex<T> {
        if self.rows() == 0 {
            return Complex::one();
        }
        Lu::new(self).det()
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        Lu::new(self).solve(&Matrix::identity(self.rows()))
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Matrix<T>) -> Option<Matrix<T>> {
        Lu::new(self).solve(rhs)
    }

    /// Solves `X · self = rhs` for `X`.
    pub fn solve_right(&self, rhs: &Matrix<T>) -> Option<Matrix<T>> {
        let xt = Lu::new(&self.transpose()).solve(&rhs.transpose())?;
        Some(xt.transpose())
    }
}

/// Solves `U x = b` in place for upper-triangular `U` (columns of `b` independently).
pub fn solve_upper_triangular<T: Real>(u: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = u.rows();
    let mut x = b.clone();
    for col in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, col)];
            for k in i + 1..n {
                s -= u[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / u[(i, i)];
        }
    }
    x
}
