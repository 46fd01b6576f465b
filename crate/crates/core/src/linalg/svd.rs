// SPDX-License-Identifier: Apache-2.0

//! One-sided (Hestenes) Jacobi singular value decomposition.

use num_complex::Complex;
use num_traits::Zero;

use super::Matrix;
use crate::scalar::Real;

/// Singular values (descending) with the matching right singular vectors as columns of `v`.
#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
}

const MAX_SWEEPS: usize = 80;

impl<T: Real> Svd<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        let (m, n) = a.shape();
        // columns stored contiguously
        let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
        let mut vcols: Vec<Vec<Complex<T>>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { Complex::new(T::one(), T::zero()) } else { Complex::zero() }).collect())
            .collect();
        let eps = T::epsilon();
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: T = cols[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: T = cols[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex<T> = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * *y).sum();
                    let g = gamma.norm();
                    if g.is_zero() || g <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (g + g);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let cs = T::one() / (T::one() + t * t).sqrt();
                    let sn = cs * t;
                    rotate(&mut cols, p, q, cs, sn, phase);
                    rotate(&mut vcols, p, q, cs, sn, phase);
                }
            }
            if !rotated {
                break;
            }
        }
        let mut idx: Vec<(usize, T)> = cols
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()))
            .collect();
        idx.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let v = Matrix::from_fn(n, n, |i, j| vcols[idx[j].0][i]);
        Self {
            singular_values: idx.iter().map(|x| x.1).collect(),
            v,
        }
    }

    pub fn largest(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn smallest(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }

    /// Count of singular values strictly above `rel_tol · max(σ_max, scale)`.
    pub fn rank_with(&self, rel_tol: T, scale: T) -> usize {
        let cut = rel_tol * self.largest().max(scale);
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], p: usize, q: usize, cs: T, sn: T, phase: Complex<T>) {
    // new_p = c·p − s·e^{−iφ}·q ; new_q = s·e^{iφ}·p + c·q
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = xp * cs - yq * phase.conj() * sn;
        *y = xp * phase * sn + yq * cs;
    }
}

impl<T: Real> Matrix<T> {
    pub fn singular_values(&self) -> Vec<T> {
        Svd::new(self).singular_values
    }

    /// Numerical rank: singular values above `rel_tol` times the largest one.
    pub fn rank(&self, rel_tol: T) -> usize {
        Svd::new(self).rank_with(rel_tol, T::zero())
    }

    /// Orthonormal basis (as columns) of the numerical null space.
    pub fn null_space(&self, rel_tol: T) -> Matrix<T> {
        let svd = Svd::new(self);
        let n = self.cols();
        let r = svd.rank_with(rel_tol, T::zero());
        svd.v.submatrix(0, r, n, n - r)
    }

    /// Ratio of the `min(rows, cols)`-th to the largest singular value (zero
    /// for a zero matrix).
    pub fn inverse_condition(&self) -> T {
        let svd = if self.rows() < self.cols() {
            Svd::new(&self.adjoint())
        } else {
            Svd::new(self)
        };
        if svd.largest().is_zero() {
            T::zero()
        } else {
            svd.smallest() / svd.largest()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use crate::random::random_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_singular_values() {
        let a = Matrix::<f64>::diag(&[c(3.0, 0.0), c(0.0, -5.0), c(0.0, 0.0)]);
        let s = a.singular_values();
        assert!((s[0] - 5.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15 && s[2] == 0.0);
        assert_eq!(a.rank(1e-9), 2);
    }

    #[test]
    fn rank_of_product_of_thin_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_matrix::<f64, _>(&mut rng, 7, 2, 1.0);
        let w = random_matrix::<f64, _>(&mut rng, 2, 5, 1.0);
        let a = &u * &w;
        assert_eq!(a.rank(1e-9), 2);
        assert_eq!(a.transpose().rank(1e-9), 2);
        let ns = a.null_space(1e-9);
        assert_eq!(ns.cols(), 3);
        assert!((&a * &ns).max_abs() < 1e-12);
    }

    #[test]
    fn frobenius_norm_matches_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix::<f64, _>(&mut rng, 4, 6, 1.0);
        let s = a.singular_values();
        let f: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((f - a.norm_fro()).abs() < 1e-12);
        assert_eq!(s.len(), 6);
        assert!(s[4] < 1e-12 && s[5] < 1e-12);
    }
}
