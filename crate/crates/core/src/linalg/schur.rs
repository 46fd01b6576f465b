// SPDX-License-Identifier: Apache-2.0

//! Complex Schur decomposition `A = Q U Q^H` by Householder reduction to
//! Hessenberg form followed by shifted QR with Givens rotations.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct Schur<T: Real> {
    /// Unitary factor.
    pub q: Matrix<T>,
    /// Upper-triangular factor.
    pub u: Matrix<T>,
}

const MAX_ITER_PER_EIGENVALUE: usize = 60;

impl<T: Real> Schur<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        assert!(a.is_square(), "Schur decomposition of a non-square matrix");
        if !a.is_finite() {
            return Err(Error::EigenSolverFailure("non-finite input".into()));
        }
        let n = a.rows();
        let (mut h, mut q) = hessenberg(a);
        let eps = T::epsilon();
        let mut hi = n.saturating_sub(1);
        let mut iter = 0usize;
        let mut total = 0usize;
        while hi > 0 {
            // locate the start of the active unreduced block
            let mut l = hi;
            while l > 0 {
                let s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
                let s = if s.is_zero() { h.max_abs() } else { s };
                if h[(l, l - 1)].l1_norm() <= eps * s {
                    h[(l, l - 1)] = Complex::zero();
                    break;
                }
                l -= 1;
            }
            if l == hi {
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if iter > MAX_ITER_PER_EIGENVALUE || total > MAX_ITER_PER_EIGENVALUE * n.max(1) * 4 {
                return Err(Error::EigenSolverFailure(format!(
                    "QR iteration did not converge (block {l}..={hi})"
                )));
            }
            let mu = if iter % 11 == 10 {
                // exceptional shift
                h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
            } else {
                wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
            };
            qr_step(&mut h, &mut q, l, hi, mu);
        }
        for i in 1..n {
            for j in 0..i {
                h[(i, j)] = Complex::zero();
            }
        }
        Ok(Self { q, u: h })
    }

    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        (0..self.u.rows()).map(|i| self.u[(i, i)]).collect()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        &(&self.q * &self.u) * &self.q.adjoint()
    }

    /// Swaps the adjacent diagonal entries `k` and `k + 1` of `U` by a unitary
    /// similarity, keeping `Q U Q^H` fixed.
    pub fn swap_adjacent(&mut self, k: usize) {
        let n = self.u.rows();
        let a = self.u[(k, k)];
        let b = self.u[(k, k + 1)];
        let d = self.u[(k + 1, k + 1)];
        // eigenvector of the 2x2 block for eigenvalue d
        let v1 = b;
        let v2 = d - a;
        let r = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
        if r.is_zero() {
            return;
        }
        let (c1, c2) = (v1 / r, v2 / r);
        // G = [[c1, -conj(c2)], [c2, conj(c1)]]; U <- G^H U G, Q <- Q G
        for j in 0..n {
            let x = self.u[(k, j)];
            let y = self.u[(k + 1, j)];
            self.u[(k, j)] = c1.conj() * x + c2.conj() * y;
            self.u[(k + 1, j)] = -c2 * x + c1 * y;
        }
        for i in 0..n {
            let x = self.u[(i, k)];
            let y = self.u[(i, k + 1)];
            self.u[(i, k)] = x * c1 + y * c2;
            self.u[(i, k + 1)] = -x * c2.conj() + y * c1.conj();
            let x = self.q[(i, k)];
            let y = self.q[(i, k + 1)];
            self.q[(i, k)] = x * c1 + y * c2;
            self.q[(i, k + 1)] = -x * c2.conj() + y * c1.conj();
        }
        self.u[(k + 1, k)] = Complex::zero();
        self.u[(k, k)] = d;
        self.u[(k + 1, k + 1)] = a;
    }

    /// Reorders the Schur form so that diagonal positions sharing a key become
    /// contiguous. Keys are grouped in order of first appearance. Returns the
    /// key of each diagonal position after reordering.
    pub fn group_by_key(&mut self, keys: &[usize]) -> Vec<usize> {
        let n = keys.len();
        assert_eq!(n, self.u.rows());
        let mut order: Vec<usize> = Vec::new();
        for &k in keys {
            if !order.contains(&k) {
                order.push(k);
            }
        }
        let rank = |key: usize| order.iter().position(|&k| k == key).unwrap();
        let mut cur: Vec<usize> = keys.to_vec();
        // adjacent-swap insertion sort, stable within a key
        for i in 1..n {
            let mut j = i;
            while j > 0 && rank(cur[j - 1]) > rank(cur[j]) {
                self.swap_adjacent(j - 1);
                cur.swap(j - 1, j);
                j -= 1;
            }
        }
        cur
    }
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let tr2 = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = tr2 + disc;
    let l2 = tr2 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (Complex<T>, Complex<T>) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r.is_zero() {
        (Complex::one(), Complex::zero())
    } else {
        (a / r, b / r)
    }
}

/// One explicit-shift QR sweep on rows/columns `l..=hi`, applied to the full matrix.
fn qr_step<T: Real>(h: &mut Matrix<T>, q: &mut Matrix<T>, l: usize, hi: usize, mu: Complex<T>) {
    let n = h.rows();
    for i in l..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        h[(k + 1, k)] = Complex::zero();
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = l + idx;
        for i in 0..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = x * c + y * s;
            q[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for i in l..=hi {
        h[(i, i)] += mu;
    }
}

/// Householder reduction to upper Hessenberg form: returns `(H, Q)` with `A = Q H Q^H`.
fn hessenberg<T: Real>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let norm: T = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if norm.is_zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm().is_zero() {
            Complex::one()
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm.is_zero() {
            continue;
        }
        for z in &mut v {
            *z = *z / vnorm;
        }
        let two = T::lit(2.0);
        // H <- (I - 2vv^H) H
        for j in 0..n {
            let dot: Complex<T> = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= *vi * dot * two;
            }
        }
        // H <- H (I - 2vv^H), Q <- Q (I - 2vv^H)
        for i in 0..n {
            let dot: Complex<T> = v.iter().enumerate().map(|(t, vi)| h[(i, k + 1 + t)] * *vi).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= dot * vi.conj() * two;
            }
            let dot: Complex<T> = v.iter().enumerate().map(|(t, vi)| q[(i, k + 1 + t)] * *vi).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(i, k + 1 + t)] -= dot * vi.conj() * two;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    (h, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_schur(a: &Matrix<f64>, s: &Schur<f64>, tol: f64) {
        assert!(s.reconstruct().dist(a) <= tol * a.norm_fro().max(1.0));
        let n = a.rows();
        assert!((&s.q.adjoint() * &s.q).dist(&Matrix::identity(n)) < 1e-12);
        for i in 0..n {
            for j in 0..i {
                assert_eq!(s.u[(i, j)], Complex::zero());
            }
        }
    }

    #[test]
    fn random_matrices_decompose() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=9 {
            for _ in 0..5 {
                let a = random_matrix::<f64, _>(&mut rng, n, n, 1.0);
                let s = Schur::new(&a).unwrap();
                assert_schur(&a, &s, 1e-12);
                let tr: Complex<f64> = s.eigenvalues().iter().sum();
                assert!((tr - a.trace()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn real_rotation_has_complex_eigenvalues() {
        let a = Matrix::<f64>::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let s = Schur::new(&a).unwrap();
        let mut ev = s.eigenvalues();
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - Complex::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn reordering_preserves_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix::<f64, _>(&mut rng, 6, 6, 1.0);
        let mut s = Schur::new(&a).unwrap();
        let ev_before = s.eigenvalues();
        let keys = vec![2, 0, 1, 0, 2, 1];
        let after = s.group_by_key(&keys);
        assert_eq!(after, vec![2, 2, 0, 0, 1, 1]);
        assert_schur(&a, &s, 1e-12);
        let ev_after = s.eigenvalues();
        // positions 0 and 4 carried key 2 before
        assert!((ev_after[0] - ev_before[0]).norm() < 1e-12);
        assert!((ev_after[1] - ev_before[4]).norm() < 1e-12);
    }
}
