// SPDX-License-Identifier: Apache-2.0

//! The exponential transform between additive and multiplicative data, and
//! its counterpart on cyclic quivers.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::additive::{check_eigenvalues_in_t, check_residue_relations, AdditiveArrow, ConnectionSystemRep};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matfun::{exp_2pii, phi, psi, spectrum_or_nilpotent, BranchConfig, QuiverShape, ShapeRep};
use crate::multiplicative::{check_arrow_relations, check_eigenvalues_in_s, MonodromyRep, MultiplicativeArrow};
use crate::quiver::{EigenvalueSet, RiemannSurfaceQuiver, WeightData};
use crate::report::CheckReport;
use crate::scalar::{to_c64, Real};

/// Representation of the cyclic quiver `Q_m`: `maps[i]` goes from vertex
/// `i − 1` to vertex `i` (indices mod `m`), so `maps[0]` is the arrow into
/// vertex 0 and the cycle `C = maps[m−1]⋯maps[0]` acts on vertex `m − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicRep<T: Real> {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix<T>>,
}

impl<T: Real> CyclicRep<T> {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix<T>>) -> Result<Self> {
        let rep = Self { dims, maps };
        rep.validate()?;
        Ok(rep)
    }

    /// `B(σ)`: every space `C^n`, `maps[0] = σ`, the other maps identities.
    pub fn b_sigma(m: usize, sigma: &Matrix<T>) -> Self {
        assert!(m > 0 && sigma.is_square());
        let n = sigma.rows();
        let mut maps = vec![sigma.clone()];
        maps.extend((1..m).map(|_| Matrix::identity(n)));
        Self { dims: vec![n; m], maps }
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.dims.len();
        if m == 0 || self.maps.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "cyclic representation needs m > 0 spaces and m maps (got {} and {})",
                m,
                self.maps.len()
            )));
        }
        for (i, a) in self.maps.iter().enumerate() {
            let from = self.dims[(i + m - 1) % m];
            let to = self.dims[i];
            if a.shape() != (to, from) {
                return Err(Error::ShapeMismatch(format!(
                    "map {i}: expected {to}x{from}, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(())
    }

    /// `C = maps[m−1]⋯maps[1]·maps[0]`.
    pub fn cycle(&self) -> Matrix<T> {
        let mut c = self.maps[0].clone();
        for a in &self.maps[1..] {
            c = a * &c;
        }
        c
    }

    pub fn shape(&self) -> QuiverShape {
        let m = self.m();
        QuiverShape {
            vertices: m,
            arrows: (0..m).map(|i| ((i + m - 1) % m, i)).collect(),
        }
    }

    pub fn to_shape_rep(&self) -> ShapeRep<T> {
        ShapeRep {
            dims: self.dims.clone(),
            maps: self.maps.clone(),
        }
    }
}

fn first_outside<T: Real>(x: &Matrix<T>, t: &EigenvalueSet<T>, tol: T) -> Result<Option<Complex<T>>> {
    let spec = spectrum_or_nilpotent(x)?;
    Ok(spec.eigenvalues.into_iter().find(|&z| !t.contains(z, tol)))
}

/// `a₁′ = a₁·φ(C)`, other maps unchanged. When `check` is given, the spectrum
/// of `C` must lie in `T` within the tolerance.
pub fn cyclic_exp<T: Real>(rep: &CyclicRep<T>, check: Option<(&EigenvalueSet<T>, T)>) -> Result<CyclicRep<T>> {
    rep.validate()?;
    let c = rep.cycle();
    if let Some((t, tol)) = check {
        t.validate()?;
        if let Some(z) = first_outside(&c, t, tol)? {
            return Err(Error::SpectrumOutsideT { eigenvalue: to_c64(z) });
        }
    }
    let mut out = rep.clone();
    out.maps[0] = &rep.maps[0] * &phi(&c);
    Ok(out)
}

/// `a₁″ = a₁·ψ(C)`, other maps unchanged; inverse of [`cyclic_exp`] on
/// representations whose cycle has spectrum in `S`.
pub fn cyclic_log<T: Real>(rep: &CyclicRep<T>, t: &EigenvalueSet<T>, cfg: &BranchConfig<T>) -> Result<CyclicRep<T>> {
    rep.validate()?;
    let c = rep.cycle();
    let mut out = rep.clone();
    out.maps[0] = &rep.maps[0] * &psi(&c, t, cfg)?;
    Ok(out)
}

/// Tolerances for the transforms.
#[derive(Clone, Copy, Debug)]
pub struct TransformConfig<T: Real> {
    /// Tolerance for the precondition and postcondition relation checks.
    pub tol: T,
    pub branch: BranchConfig<T>,
}

impl<T: Real> Default for TransformConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-9),
            branch: BranchConfig::default(),
        }
    }
}

fn first_failure(report: &CheckReport) -> Option<(String, f64)> {
    report.failures().next().map(|e| (e.label.clone(), e.defect))
}

/// `ρ_a^* = ∇_a φ(E_a∇_a)`, evaluated on the smaller of the two products.
fn rho_star<T: Real>(e: &Matrix<T>, nabla: &Matrix<T>) -> Matrix<T> {
    if nabla.rows() < nabla.cols() {
        &phi(&(nabla * e)) * nabla
    } else {
        nabla * &phi(&(e * nabla))
    }
}

/// `∇_a = ρ_a^* ψ(ρ_aρ_a^*)`, evaluated on the smaller of the two products.
fn nabla_from<T: Real>(rho: &Matrix<T>, rho_star: &Matrix<T>, t: &EigenvalueSet<T>, cfg: &BranchConfig<T>) -> Result<Matrix<T>> {
    if rho_star.rows() < rho_star.cols() {
        Ok(&psi(&(rho_star * rho), t, cfg)? * rho_star)
    } else {
        Ok(rho_star * &psi(&(rho * rho_star), t, cfg)?)
    }
}

/// Additive to multiplicative data: `ρ_a = E_a`, `ρ_a^* = ∇_aφ(E_a∇_a)`,
/// `ρ(ℓ_p) = e^{−2πiR_p}`.
///
/// Requires genus-zero components, non-interfering arrows, residue relations
/// within `cfg.tol` and the spectra of `∇_aE_a` in `T`.
pub fn forward_transform<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    rep: &ConnectionSystemRep<T>,
    t: &EigenvalueSet<T>,
    cfg: &TransformConfig<T>,
) -> Result<MonodromyRep<T>> {
    gamma.require_p1_non_interfering()?;
    rep.validate(gamma)?;
    let residues = check_residue_relations(gamma, weights, rep, cfg.tol)?;
    if let Some((point, defect)) = first_failure(&residues) {
        return Err(Error::RelationDefect {
            location: format!("residue relation at {point}"),
            defect,
        });
    }
    let spectra = check_eigenvalues_in_t(gamma, rep, t, cfg.tol)?;
    if let Some((arrow, _)) = first_failure(&spectra) {
        let m = &rep.arrows[&arrow];
        let z = first_outside(&(&m.nabla * &m.e), t, cfg.tol)?
            .or(first_outside(&(&m.e * &m.nabla), t, cfg.tol)?)
            .unwrap_or_else(Complex::zero);
        return Err(Error::SpectrumOutsideT { eigenvalue: to_c64(z) }.at(format!("arrow {arrow}")));
    }
    let arrows = rep
        .arrows
        .iter()
        .map(|(id, m)| {
            (
                id.clone(),
                MultiplicativeArrow {
                    rho: m.e.clone(),
                    rho_star: rho_star(&m.e, &m.nabla),
                },
            )
        })
        .collect();
    let point_monodromies = rep
        .residues
        .iter()
        .map(|(p, r)| (p.clone(), exp_2pii(&-r)))
        .collect();
    Ok(MonodromyRep {
        dims: rep.dims.clone(),
        point_monodromies,
        genus: BTreeMap::new(),
        arrows,
    })
}

/// Multiplicative to additive data: `E_a = ρ_a`, `∇_a = ρ_a^*ψ(ρ_aρ_a^*)`, and
/// residues defined by the residue relation, then checked against
/// `e^{−2πiR_p} = ρ(ℓ_p)` relative to `max(1, ‖ρ(ℓ_p)‖)`.
pub fn inverse_transform<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    mrep: &MonodromyRep<T>,
    t: &EigenvalueSet<T>,
    cfg: &TransformConfig<T>,
) -> Result<ConnectionSystemRep<T>> {
    gamma.require_p1_non_interfering()?;
    mrep.validate(gamma)?;
    if let Some((comp, pairs)) = mrep.genus.iter().find(|(_, v)| !v.is_empty()) {
        return Err(Error::GenusNotZero {
            component: comp.clone(),
            genus: pairs.len() as u32,
        });
    }
    let relations = check_arrow_relations(gamma, weights, mrep, cfg.tol)?;
    if let Some((point, defect)) = first_failure(&relations) {
        return Err(Error::RelationDefect {
            location: format!("arrow relation at {point}"),
            defect,
        });
    }
    let s_check = check_eigenvalues_in_s(gamma, mrep, t, cfg.tol)?;
    if let Some((arrow, _)) = first_failure(&s_check) {
        let m = &mrep.arrows[&arrow];
        let s = t.to_s()?;
        let spec = spectrum_or_nilpotent(&(&m.rho_star * &m.rho))?;
        let z = spec
            .eigenvalues
            .into_iter()
            .find(|&z| !s.contains(z, cfg.tol))
            .unwrap_or_else(Complex::zero);
        return Err(Error::SpectrumOutsideS { eigenvalue: to_c64(z) }.at(format!("arrow {arrow}")));
    }
    let mut arrows = BTreeMap::new();
    for (id, m) in &mrep.arrows {
        let nabla = nabla_from(&m.rho, &m.rho_star, t, &cfg.branch).map_err(|e| e.at(format!("arrow {id}")))?;
        arrows.insert(
            id.clone(),
            AdditiveArrow {
                e: m.rho.clone(),
                nabla,
            },
        );
    }
    let rep = crate::additive::residues_from_arrows(gamma, weights, mrep.dims.clone(), arrows)?;
    for (p, r) in &rep.residues {
        let target = &mrep.point_monodromies[p];
        let defect = exp_2pii(&-r).dist(target) / target.norm_fro().max(T::one());
        if !(defect <= cfg.tol) {
            return Err(Error::RelationDefect {
                location: format!("monodromy at {p}"),
                defect: defect.to_f64_lossy(),
            });
        }
    }
    Ok(rep)
}
