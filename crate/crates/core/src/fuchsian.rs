// SPDX-License-Identifier: Apache-2.0

//! Fuchsian systems `A(z) = Σ_p R_p/(z − p)` and their monodromy, computed by
//! integrating `Y′ = −A(z(s))·z′(s)·Y` along parameterized loops with `Y(0) = I`.
//!
//! Concatenating loops `ℓ₁` then `ℓ₂` yields `M(ℓ₂)·M(ℓ₁)`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::additive::ConnectionSystemRep;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matfun::{exp_2pii, spectrum};
use crate::ode::{integrate, IntegratorConfig};
use crate::quiver::{RiemannSurfaceQuiver, WeightData};
use crate::scalar::{to_c64, Real};

/// Global model of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemModel {
    /// Trivial bundle on the sphere: residues must sum to zero so that `∞` is regular.
    Sphere,
    /// Local model on a disk; no constraint on the residues.
    Disk,
}

/// Tolerance for `Σ R_p = 0` on the sphere, relative to `max(1, Σ‖R_p‖)`.
pub const RESIDUE_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Pole<T: Real> {
    pub position: Complex<T>,
    pub residue: Matrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianSystem<T: Real> {
    dim: usize,
    poles: Vec<Pole<T>>,
    model: SystemModel,
}

impl<T: Real> FuchsianSystem<T> {
    pub fn new(dim: usize, poles: Vec<Pole<T>>, model: SystemModel) -> Result<Self> {
        for (k, p) in poles.iter().enumerate() {
            if p.residue.shape() != (dim, dim) {
                return Err(Error::ShapeMismatch(format!(
                    "residue {k}: expected {dim}x{dim}, got {}x{}",
                    p.residue.rows(),
                    p.residue.cols()
                )));
            }
            if !(p.position.re.is_finite() && p.position.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("pole {k} has a non-finite position")));
            }
            if poles[..k].iter().any(|q| q.position == p.position) {
                return Err(Error::InvalidArgument(format!("pole {k} repeats position {}", to_c64(p.position))));
            }
        }
        if model == SystemModel::Sphere {
            let mut sum = Matrix::zeros(dim, dim);
            let mut scale = T::one();
            for p in &poles {
                sum += &p.residue;
                scale += p.residue.norm_fro();
            }
            let defect = sum.norm_fro() / scale;
            if defect > T::lit(RESIDUE_SUM_TOL) {
                return Err(Error::ResidueSumNonZero {
                    defect: defect.to_f64_lossy(),
                });
            }
        }
        Ok(Self { dim, poles, model })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn poles(&self) -> &[Pole<T>] {
        &self.poles
    }

    pub fn model(&self) -> SystemModel {
        self.model
    }

    /// `A(z) = Σ R_p/(z − p)`.
    pub fn evaluate_a(&self, z: Complex<T>) -> Result<Matrix<T>> {
        let mut a = Matrix::zeros(self.dim, self.dim);
        for p in &self.poles {
            let d = z - p.position;
            if d.norm() <= T::epsilon() * p.position.norm().max(T::one()) {
                return Err(Error::AtPole { pole: to_c64(p.position) });
            }
            a += &p.residue.scale(d.inv());
        }
        Ok(a)
    }

    /// Default clearance: a tenth of the smallest distance between poles, or
    /// `None` (any positive distance) with fewer than two poles.
    pub fn default_clearance(&self) -> Option<T> {
        let mut best: Option<T> = None;
        for (i, p) in self.poles.iter().enumerate() {
            for q in &self.poles[i + 1..] {
                let d = (p.position - q.position).norm();
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best.map(|d| d * T::lit(0.1))
    }

    fn min_pole_gap(&self, k: usize) -> Option<T> {
        let p = self.poles[k].position;
        self.poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, q)| (q.position - p).norm())
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.min(d))))
    }
}

/// Smooth piece of a loop, parameterized over `s ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece<T: Real> {
    Segment { from: Complex<T>, to: Complex<T> },
    /// `center + radius·e^{i(start + sweep·s)}`.
    Arc { center: Complex<T>, radius: T, start: T, sweep: T },
}

impl<T: Real> Piece<T> {
    pub fn point(&self, s: T) -> Complex<T> {
        match *self {
            Piece::Segment { from, to } => from + (to - from) * s,
            Piece::Arc { center, radius, start, sweep } => center + Complex::from_polar(radius, start + sweep * s),
        }
    }

    pub fn derivative(&self, s: T) -> Complex<T> {
        match *self {
            Piece::Segment { from, to } => to - from,
            Piece::Arc { radius, start, sweep, .. } => {
                Complex::new(T::zero(), radius * sweep) * Complex::from_polar(T::one(), start + sweep * s)
            }
        }
    }

    fn reversed(&self) -> Self {
        match *self {
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
            Piece::Arc { center, radius, start, sweep } => Piece::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Smallest distance from the piece to `p`.
    pub fn distance_to(&self, p: Complex<T>) -> T {
        match *self {
            Piece::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let s = if len2.is_zero() {
                    T::zero()
                } else {
                    (((p - from) * d.conj()).re / len2).max(T::zero()).min(T::one())
                };
                (from + d * s - p).norm()
            }
            Piece::Arc { center, radius, start, sweep } => {
                let ends = (self.point(T::zero()) - p).norm().min((self.point(T::one()) - p).norm());
                let rel = p - center;
                if rel.norm().is_zero() {
                    return radius;
                }
                if sweep.abs() >= T::two_pi() {
                    return (rel.norm() - radius).abs();
                }
                // angle of `p` measured along the sweep direction from `start`
                let mut off = (rel.arg() - start) * sweep.signum();
                let tau = T::two_pi();
                off = off - (off / tau).floor() * tau;
                if off <= sweep.abs() {
                    (rel.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }

    /// Change of `arg(z − p)` along the piece.
    fn angle_change(&self, p: Complex<T>) -> T {
        match *self {
            Piece::Segment { from, to } => ((to - p) / (from - p)).arg(),
            Piece::Arc { .. } => {
                let n = 256usize;
                let mut total = T::zero();
                let mut a = self.point(T::zero());
                for i in 1..=n {
                    let b = self.point(T::from_usize_lossy(i) / T::from_usize_lossy(n));
                    total += ((b - p) / (a - p)).arg();
                    a = b;
                }
                total
            }
        }
    }
}

/// Closed loop as a chain of smooth pieces; positive orientation is counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop<T: Real> {
    pieces: Vec<Piece<T>>,
}

impl<T: Real> Loop<T> {
    /// Full circle starting at `center + radius·e^{i·basepoint_angle}`.
    pub fn circle(center: Complex<T>, radius: T, basepoint_angle: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidArgument("circle radius must be positive".into()));
        }
        Ok(Self {
            pieces: vec![Piece::Arc {
                center,
                radius,
                start: basepoint_angle,
                sweep: T::two_pi(),
            }],
        })
    }

    /// Closed polygon; the first and last vertex must coincide.
    pub fn polyline(vertices: &[Complex<T>]) -> Result<Self> {
        if vertices.len() < 3 || vertices.first() != vertices.last() {
            return Err(Error::InvalidArgument(
                "polyline needs at least three vertices with first = last".into(),
            ));
        }
        let pieces: Vec<Piece<T>> = vertices
            .windows(2)
            .filter(|w| w[0] != w[1])
            .map(|w| Piece::Segment { from: w[0], to: w[1] })
            .collect();
        if pieces.len() < 2 {
            return Err(Error::InvalidArgument("polyline is degenerate".into()));
        }
        Ok(Self { pieces })
    }

    /// From `base` straight towards `pole`, once around it counterclockwise at
    /// distance `radius`, and straight back.
    pub fn keyhole(base: Complex<T>, pole: Complex<T>, radius: T) -> Result<Self> {
        let dir = base - pole;
        let dist = dir.norm();
        if !(radius > T::zero()) || radius >= dist {
            return Err(Error::InvalidArgument(
                "keyhole radius must be positive and smaller than the distance from base to pole".into(),
            ));
        }
        let angle = dir.arg();
        let entry = pole + Complex::from_polar(radius, angle);
        Ok(Self {
            pieces: vec![
                Piece::Segment { from: base, to: entry },
                Piece::Arc {
                    center: pole,
                    radius,
                    start: angle,
                    sweep: T::two_pi(),
                },
                Piece::Segment { from: entry, to: base },
            ],
        })
    }

    pub fn from_pieces(pieces: Vec<Piece<T>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("loop has no pieces".into()));
        }
        let close = |a: Complex<T>, b: Complex<T>| (a - b).norm() <= T::lit(1e-12) * (T::one() + a.norm());
        for w in pieces.windows(2) {
            if !close(w[0].point(T::one()), w[1].point(T::zero())) {
                return Err(Error::InvalidArgument("loop pieces are not contiguous".into()));
            }
        }
        if !close(pieces[pieces.len() - 1].point(T::one()), pieces[0].point(T::zero())) {
            return Err(Error::InvalidArgument("loop is not closed".into()));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn base(&self) -> Complex<T> {
        self.pieces[0].point(T::zero())
    }

    /// Same path traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
        }
    }

    pub fn distance_to(&self, p: Complex<T>) -> T {
        self.pieces
            .iter()
            .map(|pc| pc.distance_to(p))
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// Winding number of the loop around `p`.
    pub fn winding_number(&self, p: Complex<T>) -> i64 {
        let total: T = self.pieces.iter().map(|pc| pc.angle_change(p)).sum();
        (total / T::two_pi()).round().to_i64().unwrap_or(0)
    }
}

fn check_clearance<T: Real>(system: &FuchsianSystem<T>, lp: &Loop<T>, clearance: Option<T>) -> Result<()> {
    let clearance = clearance.or_else(|| system.default_clearance()).unwrap_or_else(T::zero);
    for p in system.poles() {
        let d = lp.distance_to(p.position);
        if d <= clearance || d.is_zero() {
            return Err(Error::ClearanceViolated {
                pole: to_c64(p.position),
                distance: d.to_f64_lossy(),
                clearance: clearance.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

/// Monodromy `Y(1)` of `Y′ = −A(z)z′Y`, `Y(0) = I`, along the loop.
/// `clearance` overrides [`FuchsianSystem::default_clearance`].
pub fn monodromy_along<T: Real>(
    system: &FuchsianSystem<T>,
    lp: &Loop<T>,
    cfg: &IntegratorConfig<T>,
    clearance: Option<T>,
) -> Result<Matrix<T>> {
    check_clearance(system, lp, clearance)?;
    let mut y = Matrix::identity(system.dim());
    for piece in lp.pieces() {
        let rhs = |s: T, y: &Matrix<T>| -> Result<Matrix<T>> {
            let a = system.evaluate_a(piece.point(s))?;
            Ok(&a.scale(-piece.derivative(s)) * y)
        };
        y = integrate(rhs, T::zero(), T::one(), y, cfg)?.0;
    }
    Ok(y)
}

/// Keyhole radius for pole `k`: 0.3 of the distance to the nearest other pole
/// or to the base point, whichever is smaller.
fn keyhole_radius<T: Real>(system: &FuchsianSystem<T>, k: usize, base: Complex<T>) -> T {
    let to_base = (base - system.poles()[k].position).norm();
    let gap = system.min_pole_gap(k).map_or(to_base, |g| g.min(to_base));
    gap * T::lit(0.3)
}

/// Pole indices sorted by the angle at which they are seen from `base`,
/// counterclockwise, starting after the widest empty angular gap.
pub fn angular_order<T: Real>(system: &FuchsianSystem<T>, base: Complex<T>) -> Vec<usize> {
    let mut idx: Vec<(usize, T)> = system
        .poles()
        .iter()
        .enumerate()
        .map(|(k, p)| (k, (p.position - base).arg()))
        .collect();
    idx.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let n = idx.len();
    if n < 2 {
        return idx.into_iter().map(|x| x.0).collect();
    }
    let mut best = 0;
    let mut best_gap = T::neg_infinity();
    for i in 0..n {
        let next = if i + 1 < n { idx[i + 1].1 } else { idx[0].1 + T::two_pi() };
        let gap = next - idx[i].1;
        if gap > best_gap {
            best_gap = gap;
            best = (i + 1) % n;
        }
    }
    (0..n).map(|i| idx[(best + i) % n].0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TotalMonodromy<T: Real> {
    /// Pole indices in traversal order.
    pub order: Vec<usize>,
    /// Keyhole monodromy per pole, indexed like the poles.
    pub monodromies: Vec<Matrix<T>>,
    /// `M_{order[last]} ⋯ M_{order[0]}`.
    pub product: Matrix<T>,
    pub defect: f64,
    pub passed: bool,
}

/// Keyhole monodromies around every pole from `base`, composed in `order`
/// (default [`angular_order`]); passes iff `‖product − I‖ ≤ tol`.
pub fn total_monodromy_check<T: Real>(
    system: &FuchsianSystem<T>,
    base: Complex<T>,
    order: Option<&[usize]>,
    cfg: &IntegratorConfig<T>,
    tol: T,
) -> Result<TotalMonodromy<T>> {
    let n = system.poles().len();
    let order: Vec<usize> = match order {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument("ordering must be a permutation of the poles".into()));
            }
            o.to_vec()
        }
        None => angular_order(system, base),
    };
    for p in system.poles() {
        if (p.position - base).norm().is_zero() {
            return Err(Error::AtPole { pole: to_c64(p.position) });
        }
    }
    let loops = (0..n)
        .map(|k| Loop::keyhole(base, system.poles()[k].position, keyhole_radius(system, k, base)))
        .collect::<Result<Vec<_>>>()?;
    let monodromies = loops
        .par_iter()
        .map(|lp| monodromy_along(system, lp, cfg, None))
        .collect::<Result<Vec<_>>>()?;
    let mut product = Matrix::identity(system.dim());
    for &k in &order {
        product = &monodromies[k] * &product;
    }
    let defect = product.dist(&Matrix::identity(system.dim())).to_f64_lossy();
    Ok(TotalMonodromy {
        order,
        monodromies,
        passed: defect <= tol.to_f64_lossy(),
        product,
        defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonMode {
    /// Matrices compared entrywise (only the enclosed pole has a nonzero residue).
    Direct,
    /// Characteristic polynomial coefficients compared.
    CharacteristicPolynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicComparison<T: Real> {
    pub pole: usize,
    pub winding: i64,
    pub numeric: Matrix<T>,
    /// `e^{−2πi·w·R_p}` for winding number `w`.
    pub algebraic: Matrix<T>,
    pub mode: ComparisonMode,
    pub defect: f64,
    pub passed: bool,
}

/// Coefficients `c_0..c_{n-1}` of `det(xI − M) = x^n + c_{n−1}x^{n−1} + ⋯ + c_0`.
pub fn characteristic_polynomial<T: Real>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let eig = spectrum(m)?.eigenvalues;
    let mut coeffs = vec![Complex::<T>::one()];
    for z in eig {
        let mut next = vec![Complex::zero(); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * z;
        }
        coeffs = next;
    }
    coeffs.pop();
    Ok(coeffs)
}

/// Numerical monodromy around a loop enclosing exactly one pole against
/// `exp_2pii(−w·R_p)`.
pub fn compare_with_algebraic<T: Real>(
    system: &FuchsianSystem<T>,
    lp: &Loop<T>,
    cfg: &IntegratorConfig<T>,
    tol: T,
) -> Result<AlgebraicComparison<T>> {
    let windings: Vec<(usize, i64)> = system
        .poles()
        .iter()
        .enumerate()
        .map(|(k, p)| (k, lp.winding_number(p.position)))
        .filter(|&(_, w)| w != 0)
        .collect();
    match windings.len() {
        0 => return Err(Error::InvalidArgument("loop encloses no pole".into())),
        1 => {}
        count => return Err(Error::MultiplePolesEnclosed { count }),
    }
    let (pole, winding) = windings[0];
    let numeric = monodromy_along(system, lp, cfg, None)?;
    let r = &system.poles()[pole].residue;
    let algebraic = exp_2pii(&r.scale_real(-T::from_i64(winding).expect("small winding")));
    let lone = system
        .poles()
        .iter()
        .enumerate()
        .all(|(k, p)| k == pole || p.residue.max_abs().is_zero());
    let (mode, defect) = if lone {
        (ComparisonMode::Direct, numeric.dist(&algebraic).to_f64_lossy())
    } else {
        let a = characteristic_polynomial(&numeric)?;
        let b = characteristic_polynomial(&algebraic)?;
        let d = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (*x - *y).norm().to_f64_lossy())
            .fold(0.0, f64::max);
        (ComparisonMode::CharacteristicPolynomial, d)
    };
    Ok(AlgebraicComparison {
        pole,
        winding,
        numeric,
        algebraic,
        mode,
        passed: defect <= tol.to_f64_lossy(),
        defect,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hilbert21Report<T: Real> {
    pub center: String,
    pub points: Vec<String>,
    pub positions: Vec<Complex<T>>,
    pub orders: Vec<usize>,
    /// `Σ 1/n_k > 1`.
    pub spherical: bool,
    pub monodromies: Vec<Matrix<T>>,
    /// `‖(M_k − I)^{n_k}‖` per point.
    pub unipotency_defects: Vec<f64>,
    pub product_defect: f64,
    pub passed: bool,
}

/// Smallest `n ≤ dim` with `‖R^n‖ ≤ tol·max(1, ‖R‖)^n`, if any.
fn nilpotency_index<T: Real>(r: &Matrix<T>, tol: T) -> Option<usize> {
    let scale = r.norm_fro().max(T::one());
    let mut p = Matrix::identity(r.rows());
    for n in 1..=r.rows().max(1) {
        p = &p * r;
        if p.norm_fro() <= tol * scale.powi(n as i32) {
            return Some(n);
        }
    }
    None
}

/// Builds the Fuchsian system on the centre of a three-arm star from a
/// connection system with `λ = 0`, integrates its local monodromies and
/// checks `(M_k − I)^{n_k} ≈ 0` and `M_3M_2M_1 ≈ I`.
///
/// `positions` overrides the centre points' positions; `orders` defaults to
/// the centre dimension for every point.
pub fn hilbert21_demo<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    rep: &ConnectionSystemRep<T>,
    positions: Option<&[Complex<T>]>,
    orders: Option<&[usize]>,
    cfg: &IntegratorConfig<T>,
    tol: T,
) -> Result<Hilbert21Report<T>> {
    rep.validate(gamma)?;
    let weights = WeightData::zero(gamma);
    let residue_check = crate::additive::check_residue_relations(gamma, &weights, rep, tol)?;
    if let Some(e) = residue_check.failures().next() {
        return Err(Error::RelationDefect {
            location: format!("residue relation at {}", e.label),
            defect: e.defect,
        });
    }
    let centers: Vec<&str> = gamma
        .components()
        .iter()
        .filter(|c| gamma.points_on(&c.id).count() == 3)
        .map(|c| c.id.as_str())
        .collect();
    if centers.len() != 1 || gamma.components().len() != 4 || gamma.arrows().len() != 3 {
        return Err(Error::InvalidQuiver("expected a star with one centre and three arms".into()));
    }
    let center = centers[0];
    if !gamma.component(center).map(|c| c.is_p1()).unwrap_or(false) {
        return Err(Error::GenusNotZero {
            component: center.into(),
            genus: gamma.component(center).map(|c| c.genus).unwrap_or(0),
        });
    }
    let points: Vec<String> = gamma.points_on(center).map(|p| p.id.clone()).collect();
    let positions: Vec<Complex<T>> = match positions {
        Some(p) if p.len() == 3 => p.to_vec(),
        Some(_) => return Err(Error::InvalidArgument("exactly three positions are required".into())),
        None => gamma.points_on(center).map(|p| p.position).collect(),
    };
    let dim = rep.dims[center];
    let residues: Vec<Matrix<T>> = points.iter().map(|p| rep.residues[p].clone()).collect();
    let poles: Vec<Pole<T>> = positions
        .iter()
        .zip(&residues)
        .map(|(&position, r)| Pole {
            position,
            residue: r.clone(),
        })
        .collect();
    let system = FuchsianSystem::new(dim, poles, SystemModel::Sphere)?;
    if orders.is_some_and(|o| o.len() != 3) {
        return Err(Error::InvalidArgument("exactly three orders are required".into()));
    }
    let nil_tol = T::lit(1e-10);
    let mut ords = Vec::with_capacity(3);
    for (k, (p, r)) in points.iter().zip(&residues).enumerate() {
        let n = orders.and_then(|o| o.get(k).copied()).unwrap_or(dim).max(1);
        match nilpotency_index(r, nil_tol) {
            Some(i) if i <= n => ords.push(n),
            _ => {
                return Err(Error::NonNilpotentResidue {
                    point: p.clone(),
                    order: n,
                })
            }
        }
    }
    let base = hilbert21_base(&positions);
    let total = total_monodromy_check(&system, base, None, cfg, tol)?;
    let unipotency_defects: Vec<f64> = total
        .monodromies
        .iter()
        .zip(&ords)
        .map(|(m, &n)| m.shift(-Complex::<T>::one()).pow(n as u32).norm_fro().to_f64_lossy())
        .collect();
    let spherical = ords.iter().map(|&n| 1.0 / n as f64).sum::<f64>() > 1.0;
    let tol64 = tol.to_f64_lossy();
    let passed = total.passed && unipotency_defects.iter().all(|&d| d <= tol64);
    Ok(Hilbert21Report {
        center: center.to_string(),
        points,
        positions,
        orders: ords,
        spherical,
        monodromies: total.monodromies,
        unipotency_defects,
        product_defect: total.defect,
        passed,
    })
}

/// Base point below the poles, at a distance comparable to their spread.
fn hilbert21_base<T: Real>(positions: &[Complex<T>]) -> Complex<T> {
    let n = T::from_usize_lossy(positions.len());
    let mean = positions.iter().copied().sum::<Complex<T>>() / n;
    let spread = positions
        .iter()
        .map(|p| (*p - mean).norm())
        .fold(T::zero(), |a, b| a.max(b))
        .max(T::one());
    mean + Complex::new(spread * T::lit(0.137), -spread * T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn single(r: Matrix<f64>) -> FuchsianSystem<f64> {
        let n = r.rows();
        FuchsianSystem::new(
            n,
            vec![Pole {
                position: c(0.0, 0.0),
                residue: r,
            }],
            SystemModel::Disk,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_a_examples() {
        let r = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]);
        assert_eq!(single(r.clone()).evaluate_a(c(1.0, 0.0)).unwrap(), r);
        let two = FuchsianSystem::new(
            2,
            vec![
                Pole {
                    position: c(0.0, 0.0),
                    residue: r.clone(),
                },
                Pole {
                    position: c(1.0, 0.0),
                    residue: -&r,
                },
            ],
            SystemModel::Sphere,
        )
        .unwrap();
        assert!(two.evaluate_a(c(2.0, 0.0)).unwrap().dist(&r.scale_real(-0.5)) < 1e-15);
        let empty = FuchsianSystem::<f64>::new(3, vec![], SystemModel::Sphere).unwrap();
        assert_eq!(empty.evaluate_a(c(0.3, 0.1)).unwrap(), Matrix::zeros(3, 3));
        assert!(matches!(single(r).evaluate_a(c(0.0, 0.0)), Err(Error::AtPole { .. })));
    }

    #[test]
    fn sphere_requires_vanishing_residue_sum() {
        let r = Matrix::<f64>::identity(1);
        let err = FuchsianSystem::new(
            1,
            vec![Pole {
                position: c(0.0, 0.0),
                residue: r,
            }],
            SystemModel::Sphere,
        );
        assert!(matches!(err, Err(Error::ResidueSumNonZero { .. })));
    }

    #[test]
    fn single_pole_closed_forms() {
        let cfg = IntegratorConfig::default();
        let unit = Loop::circle(c(0.0, 0.0), 1.0, 0.0).unwrap();
        let m = monodromy_along(&single(Matrix::scalar(1, c(1.0 / 3.0, 0.0))), &unit, &cfg, None).unwrap();
        let expected = (c::<f64>(0.0, -2.0 * std::f64::consts::PI / 3.0)).exp();
        assert!((m[(0, 0)] - expected).norm() < 1e-8);

        let m = monodromy_along(&single(Matrix::zeros(2, 2)), &unit, &cfg, None).unwrap();
        assert!(m.dist(&Matrix::identity(2)) < 1e-14);

        let j = Matrix::jordan_block(2, c(0.0, 0.0));
        let m = monodromy_along(&single(j.clone()), &unit, &cfg, None).unwrap();
        let expected = &Matrix::identity(2) - &j.scale(crate::scalar::two_pi_i());
        assert!(m.dist(&expected) < 1e-8);
    }

    #[test]
    fn winding_numbers() {
        let unit = Loop::<f64>::circle(c(0.0, 0.0), 1.0, 0.3).unwrap();
        assert_eq!(unit.winding_number(c(0.2, 0.1)), 1);
        assert_eq!(unit.winding_number(c(2.0, 0.0)), 0);
        assert_eq!(unit.reversed().winding_number(c(0.0, 0.0)), -1);
        let kh = Loop::<f64>::keyhole(c(0.0, -3.0), c(1.0, 1.0), 0.5).unwrap();
        assert_eq!(kh.winding_number(c(1.0, 1.0)), 1);
        assert_eq!(kh.winding_number(c(-1.0, 1.0)), 0);
        let sq = Loop::<f64>::polyline(&[c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap();
        assert_eq!(sq.winding_number(c(0.0, 0.0)), 1);
    }

    #[test]
    fn clearance_is_enforced() {
        let sys = FuchsianSystem::new(
            1,
            vec![
                Pole {
                    position: c(0.0, 0.0),
                    residue: Matrix::identity(1),
                },
                Pole {
                    position: c(1.0, 0.0),
                    residue: -&Matrix::identity(1),
                },
            ],
            SystemModel::Sphere,
        )
        .unwrap();
        let lp = Loop::circle(c(0.0, 0.0), 0.95, 0.0).unwrap();
        let r = monodromy_along(&sys, &lp, &IntegratorConfig::default(), None);
        assert!(matches!(r, Err(Error::ClearanceViolated { .. })));
    }

    #[test]
    fn arc_distance() {
        let arc = Piece::Arc {
            center: c::<f64>(0.0, 0.0),
            radius: 1.0,
            start: 0.0,
            sweep: std::f64::consts::FRAC_PI_2,
        };
        assert!((arc.distance_to(c(2.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((arc.distance_to(c(-2.0, 0.0)) - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        let m = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 1.0]]);
        let cp = characteristic_polynomial(&m).unwrap();
        assert!((cp[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((cp[1] - c(-1.0, 0.0)).norm() < 1e-14);
    }
}
