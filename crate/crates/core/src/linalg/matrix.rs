// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn scalar(n: usize, value: Complex<T>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; `None` if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Builds a real matrix from nested `f64` rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let nested: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
            .collect();
        Self::from_rows(&nested)
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Jordan block `J_n(λ)`: `λ` on the diagonal, ones on the superdiagonal.
    pub fn jordan_block(n: usize, eigenvalue: Complex<T>) -> Self {
        let mut m = Self::scalar(n, eigenvalue);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = Complex::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex<T>> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius distance to `other`. Panics on shape mismatch.
    pub fn dist(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in dist");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * *b;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// `self + s·I`.
    pub fn shift(&self, s: Complex<T>) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += s;
        }
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Block-diagonal sum of the given square or rectangular blocks.
    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Converts between real scalar types through `f64`.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "({:+.6e} {:+.6e}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a, T: Real> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Mul for Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        self.matmul(&rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Complex<T>) -> Matrix<T> {
        self.scale(rhs)
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt, $assign_trait:ident, $assign:ident) => {
        impl<'a, T: Real> $trait<&'a Matrix<T>> for &'a Matrix<T> {
            type Output = Matrix<T>;

            fn $method(self, rhs: &'a Matrix<T>) -> Matrix<T> {
                assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
                Matrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a $op *b).collect(),
                }
            }
        }

        impl<T: Real> $trait for Matrix<T> {
            type Output = Matrix<T>;

            fn $method(self, rhs: Matrix<T>) -> Matrix<T> {
                (&self).$method(&rhs)
            }
        }

        impl<'a, T: Real> $assign_trait<&'a Matrix<T>> for Matrix<T> {
            fn $assign(&mut self, rhs: &'a Matrix<T>) {
                assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op *b;
                }
            }
        }
    };
}

elementwise!(Add, add, +, AddAssign, add_assign);
elementwise!(Sub, sub, -, SubAssign, sub_assign);

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Neg for Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn matmul_and_pow() {
        let j = Matrix::<f64>::jordan_block(3, c(0.0, 0.0));
        let j2 = j.pow(2);
        assert_eq!(j2[(0, 2)], c(1.0, 0.0));
        assert!(j.pow(3).max_abs() == 0.0);
        let a = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = &a * &a;
        assert_eq!(b, Matrix::from_real_rows(&[&[7.0, 10.0], &[15.0, 22.0]]));
        assert_eq!(a.pow(0), Matrix::identity(2));
    }

    #[test]
    fn adjoint_trace_norms() {
        let a = Matrix::<f64>::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(0.0, 0.0)]]);
        assert_eq!(a.adjoint()[(0, 1)], c(3.0, 0.0));
        assert_eq!(a.adjoint()[(1, 0)], c(0.0, -2.0));
        assert_eq!(a.trace(), c(1.0, 1.0));
        assert!((a.norm_fro() - (2.0f64 + 4.0 + 9.0).sqrt()).abs() < 1e-15);
        assert!((a.norm_1() - (2.0f64.sqrt() + 3.0)).abs() < 1e-15);
    }

    #[test]
    fn direct_sum_blocks() {
        let a = Matrix::<f64>::identity(1);
        let b = Matrix::<f64>::from_real_rows(&[&[2.0, 3.0]]);
        let s = Matrix::direct_sum(&[&a, &b]);
        assert_eq!(s.shape(), (2, 3));
        assert_eq!(s[(1, 2)], c(3.0, 0.0));
        assert_eq!(s[(0, 1)], c(0.0, 0.0));
    }
}
