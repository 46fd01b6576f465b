// SPDX-License-Identifier: Apache-2.0

//! Primary matrix functions used by the monodromy transform.
//!
//! * `exp_2pii(X) = e^{2πiX}` by scaling and squaring with a degree-13 Padé kernel.
//! * `φ(x) = (e^{2πix} − 1)/x`, entire with `φ(0) = 2πi`. For nilpotent
//!   arguments the defining series is finite and is summed directly; otherwise
//!   `φ(C)` is read off the exponential of the block matrix `[[2πiC, I], [0, 0]]`.
//! * `ψ(s) = t/s` where `t ∈ T` is the unique member with `e^{2πit} = 1 + s`
//!   (and `ψ(0) = 1/(2πi)`), so that `φ(t)·ψ(e^{2πit} − 1) = 1`. Different
//!   eigenvalues may sit on different branches of the logarithm, so `ψ(C)` is
//!   evaluated by a blocked Schur–Parlett recurrence over eigenvalue clusters.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{solve_upper_triangular, Matrix, Schur, Svd};
use crate::quiver::{EigenvalueSet, SSet};
use crate::scalar::{two_pi_i, Real};

/// Tolerances for matching eigenvalues to members of `S`.
#[derive(Clone, Copy, Debug)]
pub struct BranchConfig<T: Real> {
    /// Maximum distance between an eigenvalue and the member of `S` it is assigned to.
    pub match_tol: T,
    /// Single-linkage radius used to cluster eigenvalues when `T` is the strip,
    /// measured between their branch values `t`.
    pub cluster_radius: T,
}

impl<T: Real> Default for BranchConfig<T> {
    fn default() -> Self {
        Self {
            match_tol: T::lit(1e-8),
            cluster_radius: T::lit(0.1),
        }
    }
}

/// Relative threshold for the nilpotency test `‖(C/‖C‖)^d‖ ≤ NILPOTENT_TOL`.
pub const NILPOTENT_TOL: f64 = 1e-12;

/// Multiset of eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T: Real> {
    pub eigenvalues: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> Complex<T> {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> Complex<T> {
        self.eigenvalues.iter().fold(Complex::one(), |acc, z| acc * *z)
    }
}

pub fn spectrum<T: Real>(x: &Matrix<T>) -> Result<Spectrum<T>> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch(format!("spectrum of a {}x{} matrix", x.rows(), x.cols())));
    }
    Ok(Spectrum {
        eigenvalues: Schur::new(x)?.eigenvalues(),
    })
}

/// Spectrum with nilpotent inputs short-circuited to exact zeros.
pub fn spectrum_or_nilpotent<T: Real>(x: &Matrix<T>) -> Result<Spectrum<T>> {
    if is_nilpotent(x) {
        Ok(Spectrum {
            eigenvalues: vec![Complex::zero(); x.rows()],
        })
    } else {
        spectrum(x)
    }
}

/// `C^d ≈ 0` with `d = dim C`, measured on `C/‖C‖`.
pub fn is_nilpotent<T: Real>(c: &Matrix<T>) -> bool {
    assert!(c.is_square());
    let d = c.rows();
    let norm = c.norm_fro();
    if d == 0 || norm.is_zero() {
        return true;
    }
    let scaled = c.scale_real(T::one() / norm);
    scaled.pow(d as u32).norm_fro() <= T::lit(NILPOTENT_TOL)
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Matrix exponential `e^X`.
pub fn expm<T: Real>(x: &Matrix<T>) -> Matrix<T> {
    assert!(x.is_square(), "expm of a non-square matrix");
    let n = x.rows();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    if n == 1 {
        return Matrix::scalar(1, x[(0, 0)].exp());
    }
    let norm = x.norm_1().to_f64_lossy();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x.scale_real(T::lit(2f64.powi(-s)));
    let b = |k: usize| Complex::new(T::lit(PADE13[k]), T::zero());
    let id = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * &(&(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9)));
    let u_poly = &(&(&(&u_inner + &a6.scale(b(7))) + &a4.scale(b(5))) + &a2.scale(b(3))) + &id.scale(b(1));
    let u = &a * &u_poly;
    let v_inner = &a6 * &(&(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8)));
    let v = &(&(&(&v_inner + &a6.scale(b(6))) + &a4.scale(b(4))) + &a2.scale(b(2))) + &id.scale(b(0));
    let mut r = (&v - &u)
        .solve(&(&v + &u))
        .expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `e^{2πiX}`.
pub fn exp_2pii<T: Real>(x: &Matrix<T>) -> Matrix<T> {
    expm(&x.scale(two_pi_i()))
}

fn check_chain<T: Real>(a: &Matrix<T>, c: &Matrix<T>, what: &str) -> Result<()> {
    if !c.is_square() || a.cols() != c.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{what}: A is {}x{}, C is {}x{}",
            a.rows(),
            a.cols(),
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// `Σ_{n=1}^{d} (2πi)^n/n! · C^{n−1}` — exact `φ(C)` when `C^d = 0`.
pub fn phi_series_nilpotent<T: Real>(c: &Matrix<T>) -> Matrix<T> {
    let d = c.rows();
    let mut acc = Matrix::zeros(d, d);
    let mut power = Matrix::identity(d);
    let mut coeff = Complex::<T>::one();
    for n in 1..=d.max(1) {
        coeff = coeff * two_pi_i::<T>() / T::from_usize_lossy(n);
        acc += &power.scale(coeff);
        power = &power * c;
    }
    acc
}

/// `(1/2πi) Σ_{n=1}^{d} (−1)^{n−1}/n · C^{n−1}` — exact `ψ(C)` when `C^d = 0`.
pub fn psi_series_nilpotent<T: Real>(c: &Matrix<T>) -> Matrix<T> {
    let d = c.rows();
    let mut acc = Matrix::zeros(d, d);
    let mut power = Matrix::identity(d);
    let inv = Complex::<T>::one() / two_pi_i::<T>();
    for n in 1..=d.max(1) {
        let sign = if n % 2 == 1 { T::one() } else { -T::one() };
        acc += &power.scale(inv * sign / T::from_usize_lossy(n));
        power = &power * c;
    }
    acc
}

/// `φ(C)` as a square matrix.
pub fn phi<T: Real>(c: &Matrix<T>) -> Matrix<T> {
    assert!(c.is_square(), "phi of a non-square matrix");
    let m = c.rows();
    if is_nilpotent(c) {
        return phi_series_nilpotent(c);
    }
    let mut block = Matrix::zeros(2 * m, 2 * m);
    block.set_block(0, 0, &c.scale(two_pi_i()));
    block.set_block(0, m, &Matrix::identity(m));
    let e = expm(&block);
    e.submatrix(0, m, m, m).scale(two_pi_i())
}

/// `A·φ(C)`.
pub fn phi_times<T: Real>(a: &Matrix<T>, c: &Matrix<T>) -> Result<Matrix<T>> {
    check_chain(a, c, "phi_times")?;
    Ok(a * &phi(c))
}

/// `ψ(C)` for `C` with spectrum in `S`.
pub fn psi<T: Real>(c: &Matrix<T>, t: &EigenvalueSet<T>, cfg: &BranchConfig<T>) -> Result<Matrix<T>> {
    assert!(c.is_square(), "psi of a non-square matrix");
    let s_set = t.to_s()?;
    if is_nilpotent(c) {
        return Ok(psi_series_nilpotent(c));
    }
    let mut schur = Schur::new(c)?;
    let eig = schur.eigenvalues();
    let clusters = assign_branches(&eig, &s_set, cfg)?;
    let keys: Vec<usize> = clusters.assignment.clone();
    let order = schur.group_by_key(&keys);
    // block boundaries after reordering
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new(); // (start, len, cluster)
    let mut start = 0;
    while start < order.len() {
        let key = order[start];
        let mut end = start;
        while end < order.len() && order[end] == key {
            end += 1;
        }
        blocks.push((start, end - start, key));
        start = end;
    }
    let f = block_parlett(&schur.u, &blocks, |block, key| {
        let cl = &clusters.centers[key];
        psi_block(block, cl.center, cl.t)
    })?;
    Ok(&(&schur.q * &f) * &schur.q.adjoint())
}

/// `A·ψ(C)`.
pub fn psi_times<T: Real>(
    a: &Matrix<T>,
    c: &Matrix<T>,
    t: &EigenvalueSet<T>,
    cfg: &BranchConfig<T>,
) -> Result<Matrix<T>> {
    check_chain(a, c, "psi_times")?;
    Ok(a * &psi(c, t, cfg)?)
}

#[derive(Clone, Copy, Debug)]
struct ClusterBranch<T: Real> {
    center: Complex<T>,
    t: Complex<T>,
}

struct Clusters<T: Real> {
    assignment: Vec<usize>,
    centers: Vec<ClusterBranch<T>>,
}

fn assign_branches<T: Real>(eig: &[Complex<T>], s_set: &SSet<T>, cfg: &BranchConfig<T>) -> Result<Clusters<T>> {
    match s_set {
        SSet::Zero | SSet::Finite(_) => {
            let members: Vec<(Complex<T>, Complex<T>)> = match s_set {
                SSet::Finite(bs) => bs.iter().map(|b| (b.s, b.t)).collect(),
                _ => vec![(Complex::zero(), Complex::zero())],
            };
            let mut assignment = Vec::with_capacity(eig.len());
            for &z in eig {
                let t = s_set.branch(z, cfg.match_tol)?;
                let idx = members
                    .iter()
                    .position(|m| m.1 == t)
                    .expect("branch returns a member of T");
                assignment.push(idx);
            }
            let centers = members.iter().map(|&(s, t)| ClusterBranch { center: s, t }).collect();
            Ok(Clusters { assignment, centers })
        }
        SSet::Strip => {
            let n = eig.len();
            // rejects eigenvalues at −1
            let ts: Vec<Complex<T>> = eig
                .iter()
                .map(|&z| s_set.branch(z, cfg.match_tol))
                .collect::<Result<_>>()?;
            // single-linkage clustering of the branch values by union-find
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], i: usize) -> usize {
                let mut r = i;
                while p[r] != r {
                    r = p[r];
                }
                p[i] = r;
                r
            }
            for i in 0..n {
                for j in i + 1..n {
                    if (ts[i] - ts[j]).norm() <= cfg.cluster_radius {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
            let mut roots: Vec<usize> = Vec::new();
            let mut assignment = vec![0; n];
            for (i, slot) in assignment.iter_mut().enumerate() {
                let r = find(&mut parent, i);
                let idx = match roots.iter().position(|&x| x == r) {
                    Some(k) => k,
                    None => {
                        roots.push(r);
                        roots.len() - 1
                    }
                };
                *slot = idx;
            }
            let mut centers = Vec::with_capacity(roots.len());
            for k in 0..roots.len() {
                let members: Vec<Complex<T>> = (0..n).filter(|&i| assignment[i] == k).map(|i| ts[i]).collect();
                let t = members.iter().copied().sum::<Complex<T>>() / T::from_usize_lossy(members.len());
                let center = (two_pi_i::<T>() * t).exp() - Complex::one();
                centers.push(ClusterBranch { center, t });
            }
            Ok(Clusters { assignment, centers })
        }
    }
}

const SERIES_MAX_TERMS: usize = 4000;

/// Sums `Σ coeff(k)·W^k` for `k ≥ k0` until the terms stall below roundoff.
fn matrix_series<T: Real>(w: &Matrix<T>, k0: usize, coeff: impl Fn(usize) -> Complex<T>) -> Result<Matrix<T>> {
    let n = w.rows();
    let mut power = w.pow(k0 as u32);
    let mut acc = Matrix::zeros(n, n);
    let mut quiet = 0;
    for k in k0..k0 + SERIES_MAX_TERMS {
        let term = power.scale(coeff(k));
        acc += &term;
        let tn = term.norm_fro();
        if tn <= T::epsilon() * acc.norm_fro() || power.max_abs().is_zero() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
        power = &power * w;
    }
    Err(Error::EigenSolverFailure("logarithm series did not converge on an eigenvalue cluster".into()))
}

/// `ψ` on an upper-triangular block whose eigenvalues cluster at `center`, on the branch through `t`.
fn psi_block<T: Real>(u: &Matrix<T>, center: Complex<T>, t: Complex<T>) -> Result<Matrix<T>> {
    let n = u.rows();
    let inv_2pii = Complex::<T>::one() / two_pi_i::<T>();
    if t.norm() < T::lit(0.25) && center.norm() < T::lit(0.5) {
        // principal branch: log(1+s)/(2πi s) = (1/2πi) Σ (−1)^k s^k/(k+1)
        return matrix_series(u, 0, |k| {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            inv_2pii * sign / T::from_usize_lossy(k + 1)
        });
    }
    let one_plus_c = center + Complex::one();
    let w = u.shift(-center).scale(Complex::<T>::one() / one_plus_c);
    let log_part = matrix_series(&w, 1, |k| {
        let sign = if k % 2 == 1 { T::one() } else { -T::one() };
        Complex::new(sign / T::from_usize_lossy(k), T::zero())
    })?;
    let t_of_u = &Matrix::scalar(n, t) + &log_part.scale(inv_2pii);
    // t(U)·U^{-1}; U is upper triangular with eigenvalues away from 0
    let u_inv = solve_upper_triangular(u, &Matrix::identity(n));
    Ok(&t_of_u * &u_inv)
}

/// Blocked Parlett recurrence on an upper-triangular `U` whose diagonal blocks
/// have pairwise disjoint spectra.
fn block_parlett<T: Real>(
    u: &Matrix<T>,
    blocks: &[(usize, usize, usize)],
    diag_fn: impl Fn(&Matrix<T>, usize) -> Result<Matrix<T>>,
) -> Result<Matrix<T>> {
    let n = u.rows();
    let mut f = Matrix::zeros(n, n);
    let nb = blocks.len();
    let sub = |m: &Matrix<T>, i: usize, j: usize| {
        let (ri, li, _) = blocks[i];
        let (rj, lj, _) = blocks[j];
        m.submatrix(ri, rj, li, lj)
    };
    for (i, &(start, len, key)) in blocks.iter().enumerate() {
        let ub = u.submatrix(start, start, len, len);
        f.set_block(start, start, &diag_fn(&ub, key)?);
        let _ = i;
    }
    for j in 0..nb {
        for i in (0..j).rev() {
            let uii = sub(u, i, i);
            let ujj = sub(u, j, j);
            let uij = sub(u, i, j);
            let mut rhs = &(&sub(&f, i, i) * &uij) - &(&uij * &sub(&f, j, j));
            for k in i + 1..j {
                rhs += &(&sub(&f, i, k) * &sub(u, k, j));
                rhs -= &(&sub(u, i, k) * &sub(&f, k, j));
            }
            let x = solve_triangular_sylvester(&uii, &ujj, &rhs);
            f.set_block(blocks[i].0, blocks[j].0, &x);
        }
    }
    Ok(f)
}

/// Solves `A X − X B = C` for upper-triangular `A` and `B` with disjoint spectra.
fn solve_triangular_sylvester<T: Real>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Matrix<T> {
    let (p, q) = c.shape();
    let mut x = Matrix::zeros(p, q);
    for l in 0..q {
        let mut rhs = Matrix::from_fn(p, 1, |i, _| c[(i, l)]);
        for m in 0..l {
            let bml = b[(m, l)];
            if bml.is_zero() {
                continue;
            }
            for i in 0..p {
                rhs[(i, 0)] += x[(i, m)] * bml;
            }
        }
        let shifted = a.shift(-b[(l, l)]);
        let col = solve_upper_triangular(&shifted, &rhs);
        for i in 0..p {
            x[(i, l)] = col[(i, 0)];
        }
    }
    x
}

/// Shape of a quiver for intertwiner computations: vertex count and `(tail, head)` per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverShape {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

/// Representation of a [`QuiverShape`]: `maps[a]` is `dims[head] × dims[tail]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeRep<T: Real> {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix<T>>,
}

impl QuiverShape {
    pub fn validate<T: Real>(&self, rep: &ShapeRep<T>) -> Result<()> {
        if rep.dims.len() != self.vertices || rep.maps.len() != self.arrows.len() {
            return Err(Error::ShapeMismatch("representation does not match quiver shape".into()));
        }
        for (k, (&(t, h), m)) in self.arrows.iter().zip(&rep.maps).enumerate() {
            if m.shape() != (rep.dims[h], rep.dims[t]) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {k}: expected {}x{}, got {}x{}",
                    rep.dims[h],
                    rep.dims[t],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(())
    }
}

/// Relative singular-value threshold for intertwiner rank decisions.
pub const HOM_RANK_TOL: f64 = 1e-9;

/// Dimension of the space of tuples `(θ_v)` with `θ_head X_a = Y_a θ_tail` for every arrow.
pub fn hom_dimension<T: Real>(shape: &QuiverShape, x: &ShapeRep<T>, y: &ShapeRep<T>, rel_tol: T) -> Result<usize> {
    shape.validate(x)?;
    shape.validate(y)?;
    let system = intertwiner_system(shape, x, y);
    let unknowns = system.cols();
    if unknowns == 0 {
        return Ok(0);
    }
    if system.rows() == 0 {
        return Ok(unknowns);
    }
    let rank = Svd::new(&system).rank_with(rel_tol, T::zero());
    Ok(unknowns - rank)
}

/// Basis of intertwiners, each returned as one matrix per vertex.
pub fn hom_basis<T: Real>(shape: &QuiverShape, x: &ShapeRep<T>, y: &ShapeRep<T>, rel_tol: T) -> Result<Vec<Vec<Matrix<T>>>> {
    shape.validate(x)?;
    shape.validate(y)?;
    let system = intertwiner_system(shape, x, y);
    let offsets = unknown_offsets(x, y);
    let unknowns = system.cols();
    let basis = if system.rows() == 0 {
        Matrix::identity(unknowns)
    } else {
        system.null_space(rel_tol)
    };
    Ok((0..basis.cols())
        .map(|col| {
            (0..shape.vertices)
                .map(|v| {
                    let (rows, cols) = (y.dims[v], x.dims[v]);
                    Matrix::from_fn(rows, cols, |i, j| basis[(offsets[v] + i * cols + j, col)])
                })
                .collect()
        })
        .collect())
}

fn unknown_offsets<T: Real>(x: &ShapeRep<T>, y: &ShapeRep<T>) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(x.dims.len() + 1);
    let mut acc = 0;
    for (dx, dy) in x.dims.iter().zip(&y.dims) {
        offsets.push(acc);
        acc += dx * dy;
    }
    offsets.push(acc);
    offsets
}

fn intertwiner_system<T: Real>(shape: &QuiverShape, x: &ShapeRep<T>, y: &ShapeRep<T>) -> Matrix<T> {
    // θ_v is dims_y[v] × dims_x[v], stored row-major from offsets[v]
    let offsets = unknown_offsets(x, y);
    let unknowns = offsets[shape.vertices];
    let eq_count: usize = shape.arrows.iter().map(|&(t, h)| y.dims[h] * x.dims[t]).sum();
    let mut sys = Matrix::zeros(eq_count, unknowns);
    let mut row = 0;
    for (&(t, h), (xa, ya)) in shape.arrows.iter().zip(x.maps.iter().zip(&y.maps)) {
        let (dyh, dxh, dyt, dxt) = (y.dims[h], x.dims[h], y.dims[t], x.dims[t]);
        for i in 0..dyh {
            for j in 0..dxt {
                // (θ_h X_a)[i, j] = Σ_k θ_h[i, k] X_a[k, j]
                for k in 0..dxh {
                    sys[(row, offsets[h] + i * dxh + k)] += xa[(k, j)];
                }
                // (Y_a θ_t)[i, j] = Σ_k Y_a[i, k] θ_t[k, j]
                for k in 0..dyt {
                    sys[(row, offsets[t] + k * dxt + j)] -= ya[(i, k)];
                }
                row += 1;
            }
        }
    }
    sys
}

/// Ranks of `(X − λI)^k` for `k = 1..=dim X`, computed on `(X − λI)/(‖X‖ + |λ|√n)`
/// with singular values above `rel_tol` counted as nonzero.
pub fn jordan_rank_sequence<T: Real>(x: &Matrix<T>, eigenvalue: Complex<T>, rel_tol: T) -> Vec<usize> {
    assert!(x.is_square());
    let n = x.rows();
    let shifted = x.shift(-eigenvalue);
    // scale by ‖X‖ + |λ|√n rather than ‖X − λI‖ so that a roundoff-level
    // shift is not inflated to full rank
    let scale = x.norm_fro() + eigenvalue.norm() * T::from_usize_lossy(n).sqrt();
    if shifted.norm_fro().is_zero() || scale.is_zero() {
        return vec![0; n];
    }
    let base = shifted.scale_real(T::one() / scale);
    let mut power = Matrix::identity(n);
    (1..=n)
        .map(|_| {
            power = &power * &base;
            Svd::new(&power).rank_with(rel_tol, T::one())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_matrix;
    use crate::scalar::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn j2() -> Matrix<f64> {
        Matrix::jordan_block(2, c(0.0, 0.0))
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_2pii(&Matrix::<f64>::zeros(2, 2)), Matrix::identity(2));
        let half = Matrix::<f64>::scalar(1, c(0.5, 0.0));
        assert!((exp_2pii(&half)[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        let e = exp_2pii(&j2());
        let expected = Matrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 2.0 * PI)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(e.dist(&expected) < 1e-14);
    }

    #[test]
    fn expm_matches_taylor_on_moderate_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_matrix::<f64, _>(&mut rng, 4, 4, 0.3);
        // Taylor oracle
        let mut acc = Matrix::identity(4);
        let mut term = Matrix::identity(4);
        for k in 1..40 {
            term = (&term * &x).scale_real(1.0 / k as f64);
            acc += &term;
        }
        assert!(expm(&x).dist(&acc) < 1e-14);
    }

    #[test]
    fn expm_large_norm_matches_diagonalization() {
        // X = P D P^{-1}, e^X = P e^D P^{-1}
        let p = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]);
        let d = [c(3.0, 1.0), c(-2.0, 5.0), c(0.5, -4.0)];
        let pinv = p.inverse().unwrap();
        let x = &(&p * &Matrix::diag(&d)) * &pinv;
        let ed = Matrix::diag(&d.map(|z| z.exp()));
        let oracle = &(&p * &ed) * &pinv;
        assert!(expm(&x).dist(&oracle) / oracle.norm_fro() < 1e-13);
    }

    #[test]
    fn phi_examples() {
        let one = Matrix::<f64>::identity(1);
        let r = phi_times(&one, &Matrix::zeros(1, 1)).unwrap();
        assert!((r[(0, 0)] - c(0.0, 2.0 * PI)).norm() < 1e-15);
        let r = phi_times(&one, &Matrix::scalar(1, c(0.5, 0.0))).unwrap();
        assert!((r[(0, 0)] - c(-4.0, 0.0)).norm() < 1e-13);
        // finite series oracle on J2(0): 2πi·I + (2πi)²/2·J
        let r = phi_times(&Matrix::identity(2), &j2()).unwrap();
        let expected = Matrix::from_rows(&[
            vec![c(0.0, 2.0 * PI), c(-2.0 * PI * PI, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 2.0 * PI)],
        ]);
        assert!(r.dist(&expected) < 1e-13);
    }

    #[test]
    fn phi_scalar_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x: Complex<f64> = crate::random::random_in_disk(&mut rng, 2.0);
            let direct = ((two_pi_i::<f64>() * x).exp() - 1.0) / x;
            let m = phi(&Matrix::scalar(1, x))[(0, 0)];
            assert!((m - direct).norm() / direct.norm() <= 1e-12);
        }
    }

    #[test]
    fn phi_block_route_agrees_with_nilpotent_series() {
        // a non-trivially conjugated nilpotent matrix through both routes
        let p = Matrix::<f64>::from_real_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 2.0]]);
        let n = &(&p * &Matrix::jordan_block(3, c(0.0, 0.0))) * &p.inverse().unwrap();
        assert!(is_nilpotent(&n));
        let series = phi_series_nilpotent(&n);
        let mut block = Matrix::zeros(6, 6);
        block.set_block(0, 0, &n.scale(two_pi_i()));
        block.set_block(0, 3, &Matrix::identity(3));
        let general = expm(&block).submatrix(0, 3, 3, 3).scale(two_pi_i());
        assert!(series.dist(&general) < 1e-12);
    }

    #[test]
    fn psi_examples() {
        let cfg = BranchConfig::default();
        let one = Matrix::<f64>::identity(1);
        let r = psi_times(&one, &Matrix::zeros(1, 1), &EigenvalueSet::ZeroOnly, &cfg).unwrap();
        assert!((r[(0, 0)] - c::<f64>(1.0, 0.0) / two_pi_i::<f64>()).norm() < 1e-16);
        // branch oracle: e^{2πit} = −1 with t ∈ {0, 1/2} gives t = 1/2, ψ(−2) = −1/4
        let t = EigenvalueSet::ExplicitFinite(vec![c(0.0, 0.0), c(0.5, 0.0)]);
        let r = psi_times(&one, &Matrix::scalar(1, c(-2.0, 0.0)), &t, &cfg).unwrap();
        assert!((r[(0, 0)] - c(-0.25, 0.0)).norm() < 1e-15);
        // nilpotent log series oracle: (1/2πi)(I − J/2)
        let r = psi_times(&Matrix::identity(2), &j2(), &EigenvalueSet::ZeroOnly, &cfg).unwrap();
        let expected = (&Matrix::identity(2) - &j2().scale_real(0.5)).scale(c::<f64>(1.0, 0.0) / two_pi_i::<f64>());
        assert!(r.dist(&expected) < 1e-16);
    }

    #[test]
    fn psi_rejects_spectrum_outside_s() {
        let cfg = BranchConfig::default();
        let r = psi(&Matrix::<f64>::scalar(1, c(1.0, 0.0)), &EigenvalueSet::ZeroOnly, &cfg);
        assert!(matches!(r, Err(Error::SpectrumOutsideS { .. })));
        let r = psi(&Matrix::<f64>::scalar(1, c(-1.0, 0.0)), &EigenvalueSet::HalfOpenStrip, &cfg);
        assert!(matches!(r, Err(Error::SpectrumOutsideS { .. })));
    }

    #[test]
    fn psi_inverts_phi_with_mixed_branches() {
        // X with eigenvalues in the strip on several branches, plus a Jordan block
        let d = Matrix::<f64>::from_rows(&[
            vec![c(0.3, 0.1), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.3, 0.1), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.8, -0.4), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.05, 0.0)],
        ]);
        let p = Matrix::<f64>::from_real_rows(&[
            &[1.0, 0.2, 0.0, 0.1],
            &[0.0, 1.0, 0.3, 0.0],
            &[0.2, 0.0, 1.0, 0.0],
            &[0.0, 0.1, 0.0, 1.0],
        ]);
        let x = &(&p * &d) * &p.inverse().unwrap();
        let s = &exp_2pii(&x) - &Matrix::identity(4);
        let cfg = BranchConfig::default();
        let prod = &phi(&x) * &psi(&s, &EigenvalueSet::HalfOpenStrip, &cfg).unwrap();
        assert!(prod.dist(&Matrix::identity(4)) < 1e-9, "{prod:?}");
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&j2()).unwrap();
        assert_eq!(s.eigenvalues, vec![c(0.0, 0.0), c(0.0, 0.0)]);
        let mut s = spectrum(&Matrix::<f64>::diag(&[c(1.0, 0.0), c(-2.0, 0.0)])).unwrap().eigenvalues;
        s.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(s, vec![c(-2.0, 0.0), c(1.0, 0.0)]);
        // companion of x² − x − 1
        let comp = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 1.0]]);
        let mut s = spectrum(&comp).unwrap().eigenvalues;
        s.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let r5 = 5f64.sqrt();
        assert!((s[0] - c((1.0 - r5) / 2.0, 0.0)).norm() < 1e-14);
        assert!((s[1] - c((1.0 + r5) / 2.0, 0.0)).norm() < 1e-14);
    }

    fn one_loop() -> QuiverShape {
        QuiverShape {
            vertices: 1,
            arrows: vec![(0, 0)],
        }
    }

    fn b_rep(m: Matrix<f64>) -> ShapeRep<f64> {
        ShapeRep {
            dims: vec![m.rows()],
            maps: vec![m],
        }
    }

    #[test]
    fn hom_dimension_examples() {
        let z = b_rep(Matrix::zeros(1, 1));
        assert_eq!(hom_dimension(&one_loop(), &z, &z, HOM_RANK_TOL).unwrap(), 1);
        let one = b_rep(Matrix::identity(1));
        assert_eq!(hom_dimension(&one_loop(), &z, &one, HOM_RANK_TOL).unwrap(), 0);
        // brute force: θJ = Jθ for 2x2 θ is solved by θ = aI + bJ
        let j = b_rep(j2());
        assert_eq!(hom_dimension(&one_loop(), &j, &j, HOM_RANK_TOL).unwrap(), 2);
        let basis = hom_basis(&one_loop(), &j, &j, HOM_RANK_TOL).unwrap();
        assert_eq!(basis.len(), 2);
        for th in &basis {
            assert!((&th[0] * &j2()).dist(&(&j2() * &th[0])) < 1e-12);
        }
    }

    #[test]
    fn jordan_ranks() {
        let j = Matrix::<f64>::jordan_block(4, c(0.3, 0.0));
        assert_eq!(jordan_rank_sequence(&j, c(0.3, 0.0), 1e-8), vec![3, 2, 1, 0]);
        let d = Matrix::<f64>::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(jordan_rank_sequence(&d, c(1.0, 0.0), 1e-8), vec![1, 1, 1]);
    }

    #[test]
    fn f32_exponential_smoke() {
        let x = Matrix::<f32>::scalar(1, Complex::new(0.25f32, 0.0));
        let e = exp_2pii(&x)[(0, 0)];
        assert!((e - Complex::new(0.0f32, 1.0)).norm() < 1e-6);
        let r = phi(&Matrix::<f32>::jordan_block(2, Complex::new(0.0, 0.0)));
        assert!((r[(0, 0)] - Complex::new(0.0f32, 2.0 * std::f32::consts::PI)).norm() < 1e-5);
    }
}
