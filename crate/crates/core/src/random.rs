// SPDX-License-Identifier: Apache-2.0

//! Random complex samples used by generators, property tests and the
//! verification pipelines.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;

use crate::additive::{residues_from_arrows, AdditiveArrow, ConnectionSystemRep};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::quiver::{EigenvalueSet, RiemannSurfaceQuiver, WeightData};
use crate::scalar::Real;
use crate::transform::CyclicRep;

/// Uniform sample from the closed disk of the given radius.
pub fn random_in_disk<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex<T> {
    loop {
        let x: f64 = rng.gen_range(-1.0..=1.0);
        let y: f64 = rng.gen_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            return Complex::new(T::lit(x * radius), T::lit(y * radius));
        }
    }
}

/// Matrix with independent entries uniform in the disk of the given radius.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, radius: f64) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| random_in_disk(rng, radius))
}

/// Random matrix of rank at most `rank`, built as a product of thin factors.
pub fn random_low_rank<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> Matrix<T> {
    let left = random_matrix(rng, rows, rank, 1.0);
    let right = random_matrix(rng, rank, cols, 1.0);
    &left * &right
}

/// Random invertible matrix, `I + small` so that the condition number stays moderate.
pub fn random_invertible<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    if n == 0 {
        return Matrix::identity(0);
    }
    loop {
        let m = Matrix::identity(n) + random_matrix(rng, n, n, 0.5);
        if m.inverse_condition() > T::lit(0.05) {
            return m;
        }
    }
}

/// Deterministic per-sample seed derived from a base seed and a sample index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Strictly upper triangular matrix conjugated by a random invertible one.
pub fn random_nilpotent<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    let u = Matrix::from_fn(n, n, |i, j| if j > i { random_in_disk(rng, 1.0) } else { Complex::new(T::zero(), T::zero()) });
    let p: Matrix<T> = random_invertible(rng, n);
    let p_inv = p.inverse().expect("well-conditioned by construction");
    &(&p * &u) * &p_inv
}

/// Eigenvalue drawn from `T`: 0 for `{0}`, a point of `[0, 0.9] × [−0.5, 0.5]`
/// for the strip, a uniformly chosen member otherwise.
pub fn random_in_t<T: Real, R: Rng + ?Sized>(rng: &mut R, t: &EigenvalueSet<T>) -> Complex<T> {
    match t {
        EigenvalueSet::ZeroOnly => Complex::new(T::zero(), T::zero()),
        EigenvalueSet::HalfOpenStrip => Complex::new(T::lit(rng.gen_range(0.0..0.9)), T::lit(rng.gen_range(-0.5..0.5))),
        EigenvalueSet::ExplicitFinite(v) => v[rng.gen_range(0..v.len())],
    }
}

/// `P·U·P^{-1}` with `U` upper triangular, its diagonal drawn from `T`.
/// For `{0}` the result is nilpotent.
pub fn random_with_spectrum_in<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, t: &EigenvalueSet<T>) -> Matrix<T> {
    let diag: Vec<Complex<T>> = (0..n).map(|_| random_in_t(rng, t)).collect();
    let u = Matrix::from_fn(n, n, |i, j| match j.cmp(&i) {
        std::cmp::Ordering::Equal => diag[i],
        std::cmp::Ordering::Greater => random_in_disk(rng, 0.5),
        std::cmp::Ordering::Less => Complex::new(T::zero(), T::zero()),
    });
    let p: Matrix<T> = random_invertible(rng, n);
    let p_inv = p.inverse().expect("well-conditioned by construction");
    &(&p * &u) * &p_inv
}

/// `(E, ∇)` with `E: C^m → C^n` random of full rank (condition number at most
/// 10) and the spectrum of `∇E` (equivalently, the nonzero spectrum of `E∇`) in `T`.
pub fn random_arrow_pair<T: Real, R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, t: &EigenvalueSet<T>) -> (Matrix<T>, Matrix<T>) {
    let e: Matrix<T> = loop {
        let e = random_matrix(rng, n, m, 1.0);
        if m == 0 || n == 0 || e.inverse_condition() > T::lit(0.1) {
            break e;
        }
    };
    let eh = e.adjoint();
    let nabla = if m <= n {
        // ∇ = K·E⁺ with E⁺ a left inverse, so ∇E = K
        let k = random_with_spectrum_in(rng, m, t);
        let gram = (&eh * &e).inverse().expect("full column rank by construction");
        &(&k * &gram) * &eh
    } else {
        // ∇ = E⁺·L with E⁺ a right inverse, so E∇ = L
        let l = random_with_spectrum_in(rng, n, t);
        let gram = (&e * &eh).inverse().expect("full row rank by construction");
        &(&eh * &gram) * &l
    };
    (e, nabla)
}

/// Connection system on a genus-zero quiver with non-interfering arrows:
/// random arrow pairs with spectra in `T`, residues completed through the
/// residue relation.
pub fn random_connection_system<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    dims: BTreeMap<String, usize>,
    t: &EigenvalueSet<T>,
) -> Result<ConnectionSystemRep<T>> {
    let mut arrows = BTreeMap::new();
    for a in gamma.arrows() {
        let m = dims[gamma.component_of(&a.tail)];
        let n = dims[gamma.component_of(&a.head)];
        let (e, nabla) = random_arrow_pair(rng, m, n, t);
        arrows.insert(a.id.clone(), AdditiveArrow { e, nabla });
    }
    residues_from_arrows(gamma, weights, dims, arrows)
}

/// Nilpotent representation of `Q_m`: a direct sum of random strings
/// (indecomposable nilpotent representations) in random bases. The total
/// dimension is at most `max_total`.
pub fn random_nilpotent_cyclic<T: Real, R: Rng + ?Sized>(rng: &mut R, m: usize, max_total: usize) -> CyclicRep<T> {
    assert!(m > 0);
    let mut strings: Vec<(usize, usize)> = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(1..=max_total.max(1));
    while total < target {
        let len = rng.gen_range(1..=(target - total));
        strings.push((rng.gen_range(0..m), len));
        total += len;
    }
    let mut dims = vec![0usize; m];
    let mut basis: Vec<Vec<(usize, usize)>> = Vec::new();
    for &(start, len) in &strings {
        let mut chain = Vec::with_capacity(len);
        for j in 0..len {
            let v = (start + j) % m;
            chain.push((v, dims[v]));
            dims[v] += 1;
        }
        basis.push(chain);
    }
    let mut maps: Vec<Matrix<T>> = (0..m).map(|i| Matrix::zeros(dims[i], dims[(i + m - 1) % m])).collect();
    for chain in &basis {
        for w in chain.windows(2) {
            let ((_, from), (to_v, to)) = (w[0], w[1]);
            maps[to_v][(to, from)] = Complex::new(T::one(), T::zero());
        }
    }
    let changes: Vec<Matrix<T>> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
    let inverses: Vec<Matrix<T>> = changes.iter().map(|p| p.inverse().expect("well-conditioned")).collect();
    for (i, map) in maps.iter_mut().enumerate() {
        let from = (i + m - 1) % m;
        *map = &(&changes[i] * &*map) * &inverses[from];
    }
    CyclicRep { dims, maps }
}
