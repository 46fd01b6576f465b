// SPDX-License-Identifier: Apache-2.0

//! Additive side: residue data of connection systems on a quiver of Riemann
//! surfaces with trivial bundles, and the lifting criterion for bundle
//! representations described by rank and degree.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matfun::spectrum_or_nilpotent;
use crate::quiver::{EigenvalueSet, RiemannSurfaceQuiver, WeightData};
use crate::report::CheckReport;
use crate::scalar::{LiftScalar, Real};

/// `E_a: E_p → E_q` and `∇_a: E_q → E_p` for an arrow `a: p → q`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveArrow<T: Real> {
    pub e: Matrix<T>,
    pub nabla: Matrix<T>,
}

/// Connection system on trivial bundles: one coordinate space per component,
/// a residue per marked point and a pair of maps per arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSystemRep<T: Real> {
    pub dims: BTreeMap<String, usize>,
    pub residues: BTreeMap<String, Matrix<T>>,
    pub arrows: BTreeMap<String, AdditiveArrow<T>>,
}

pub(crate) fn check_keys<'a, V>(
    what: &str,
    map: &BTreeMap<String, V>,
    expected: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let expected: Vec<&str> = expected.collect();
    for id in &expected {
        if !map.contains_key(*id) {
            return Err(Error::ShapeMismatch(format!("{what}: missing entry for {id:?}")));
        }
    }
    if let Some(extra) = map.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(Error::ShapeMismatch(format!("{what}: unknown id {extra:?}")));
    }
    Ok(())
}

pub(crate) fn check_shape<T: Real>(what: &str, m: &Matrix<T>, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl<T: Real> ConnectionSystemRep<T> {
    /// Zero representation with the given dimensions.
    pub fn zero(gamma: &RiemannSurfaceQuiver<T>, dims: BTreeMap<String, usize>) -> Result<Self> {
        check_keys("dims", &dims, gamma.components().iter().map(|c| c.id.as_str()))?;
        let dim_of = |p: &str| dims[gamma.component_of(p)];
        let residues = gamma
            .marked_points()
            .iter()
            .map(|p| (p.id.clone(), Matrix::zeros(dim_of(&p.id), dim_of(&p.id))))
            .collect();
        let arrows = gamma
            .arrows()
            .iter()
            .map(|a| {
                let (m, n) = (dim_of(&a.tail), dim_of(&a.head));
                (
                    a.id.clone(),
                    AdditiveArrow {
                        e: Matrix::zeros(n, m),
                        nabla: Matrix::zeros(m, n),
                    },
                )
            })
            .collect();
        Ok(Self { dims, residues, arrows })
    }

    pub fn validate(&self, gamma: &RiemannSurfaceQuiver<T>) -> Result<()> {
        check_keys("dims", &self.dims, gamma.components().iter().map(|c| c.id.as_str()))?;
        check_keys("residues", &self.residues, gamma.marked_points().iter().map(|p| p.id.as_str()))?;
        check_keys("arrows", &self.arrows, gamma.arrows().iter().map(|a| a.id.as_str()))?;
        for p in gamma.marked_points() {
            let d = self.dims[&p.component];
            check_shape(&format!("residue at {}", p.id), &self.residues[&p.id], d, d)?;
        }
        for a in gamma.arrows() {
            let m = self.dim_at(gamma, &a.tail);
            let n = self.dim_at(gamma, &a.head);
            let maps = &self.arrows[&a.id];
            check_shape(&format!("E at arrow {}", a.id), &maps.e, n, m)?;
            check_shape(&format!("nabla at arrow {}", a.id), &maps.nabla, m, n)?;
        }
        Ok(())
    }

    /// Dimension of the fibre at a marked point.
    pub fn dim_at(&self, gamma: &RiemannSurfaceQuiver<T>, point: &str) -> usize {
        self.dims[gamma.component_of(point)]
    }
}

/// `Σ_{t(a)=p} ∇_aE_a − Σ_{h(a)=p} E_a∇_a`.
fn arrow_contribution<T: Real>(gamma: &RiemannSurfaceQuiver<T>, arrows: &BTreeMap<String, AdditiveArrow<T>>, point: &str, d: usize) -> Matrix<T> {
    let mut acc = Matrix::zeros(d, d);
    for a in gamma.arrows_with_tail(point) {
        let m = &arrows[&a.id];
        acc += &(&m.nabla * &m.e);
    }
    for a in gamma.arrows_with_head(point) {
        let m = &arrows[&a.id];
        acc -= &(&m.e * &m.nabla);
    }
    acc
}

/// Completes arrow data to a connection system by defining each residue
/// through the residue relation `R_p = λ_p I + Σ_{t(a)=p} ∇_aE_a − Σ_{h(a)=p} E_a∇_a`.
pub fn residues_from_arrows<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    dims: BTreeMap<String, usize>,
    arrows: BTreeMap<String, AdditiveArrow<T>>,
) -> Result<ConnectionSystemRep<T>> {
    let mut rep = ConnectionSystemRep::zero(gamma, dims)?;
    rep.arrows = arrows;
    rep.validate(gamma)?;
    for p in gamma.marked_points() {
        let d = rep.dims[&p.component];
        let r = &Matrix::scalar(d, weights.lambda(&p.id)) + &arrow_contribution(gamma, &rep.arrows, &p.id, d);
        rep.residues.insert(p.id.clone(), r);
    }
    Ok(rep)
}

/// Residue relation at every marked point, in the general (possibly interfering) form.
pub fn check_residue_relations<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    rep: &ConnectionSystemRep<T>,
    tol: T,
) -> Result<CheckReport> {
    rep.validate(gamma)?;
    let mut report = CheckReport::new();
    for p in gamma.marked_points() {
        let d = rep.dims[&p.component];
        let lhs = rep.residues[&p.id].shift(-weights.lambda(&p.id));
        let rhs = arrow_contribution(gamma, &rep.arrows, &p.id, d);
        report.push(p.id.clone(), lhs.dist(&rhs).to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// Deformed preprojective relation `Σ_{h(a)∈X_i} E_a∇_a − Σ_{t(a)∈X_i} ∇_aE_a = λ_i I`
/// per component, labelled by component id, together with `‖Σ_{p∈D_i} R_p‖`
/// labelled `<component>:residue-sum`.
pub fn check_deformed_preprojective<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    rep: &ConnectionSystemRep<T>,
    tol: T,
) -> Result<CheckReport> {
    rep.validate(gamma)?;
    for c in gamma.components() {
        if !c.is_p1() {
            return Err(Error::GenusNotZero {
                component: c.id.clone(),
                genus: c.genus,
            });
        }
    }
    let mut report = CheckReport::new();
    for c in gamma.components() {
        let d = rep.dims[&c.id];
        let mut lhs = Matrix::zeros(d, d);
        let mut residue_sum = Matrix::zeros(d, d);
        for p in gamma.points_on(&c.id) {
            lhs -= &arrow_contribution(gamma, &rep.arrows, &p.id, d);
            residue_sum += &rep.residues[&p.id];
        }
        let target = Matrix::scalar(d, weights.lambda_component(gamma, &c.id));
        report.push(c.id.clone(), lhs.dist(&target).to_f64_lossy(), tol.to_f64_lossy());
        report.push(format!("{}:residue-sum", c.id), residue_sum.norm_fro().to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// For each arrow, the distance from the spectrum of `∇_aE_a` (or of `E_a∇_a`
/// when that is smaller; both carry the same nonzero eigenvalues) to `T`.
pub fn check_eigenvalues_in_t<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    rep: &ConnectionSystemRep<T>,
    t: &EigenvalueSet<T>,
    tol: T,
) -> Result<CheckReport> {
    rep.validate(gamma)?;
    t.validate()?;
    let mut report = CheckReport::new();
    for a in gamma.arrows() {
        let m = &rep.arrows[&a.id];
        let product = if m.e.cols() <= m.e.rows() {
            &m.nabla * &m.e
        } else {
            &m.e * &m.nabla
        };
        let spec = spectrum_or_nilpotent(&product).map_err(|e| e.at(format!("arrow {}", a.id)))?;
        let worst = spec
            .eigenvalues
            .iter()
            .map(|&z| t.distance(z))
            .fold(T::zero(), |acc, d| acc.max(d));
        report.push(a.id.clone(), worst.to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// Rank and degree per component of a bundle representation (typically an
/// indecomposable direct summand). Missing components have rank and degree 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummandDescriptor {
    pub ranks: BTreeMap<String, u64>,
    pub degrees: BTreeMap<String, i64>,
}

impl SummandDescriptor {
    pub fn validate(&self) -> Result<()> {
        for (comp, &deg) in &self.degrees {
            if deg != 0 && self.ranks.get(comp).copied().unwrap_or(0) == 0 {
                return Err(Error::InvalidArgument(format!(
                    "component {comp:?} has rank 0 but degree {deg}"
                )));
            }
        }
        Ok(())
    }

    /// `deg E' = Σ_i deg E'_i`.
    pub fn degree(&self) -> i64 {
        self.degrees.values().sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.ranks {
            *out.ranks.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.degrees {
            *out.degrees.entry(k.clone()).or_insert(0) += v;
        }
        out
    }
}

/// Outcome of the lifting criterion over a list of summands.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftingVerdict<S> {
    /// `deg E' + Σ_i λ_i rank E'_i` per summand.
    pub values: Vec<S>,
    pub vanishing: Vec<bool>,
    /// A connection system exists iff every value vanishes.
    pub exists: bool,
}

/// `deg E' + Σ_i λ_i rank E'_i` for one summand.
pub fn lifting_value<S: LiftScalar>(lambda: &BTreeMap<String, S>, summand: &SummandDescriptor) -> Result<S> {
    summand.validate()?;
    let mut value = S::from_i64(summand.degree())
        .ok_or_else(|| Error::InvalidArgument("degree not representable".into()))?;
    for (comp, &rank) in &summand.ranks {
        let l = lambda
            .get(comp)
            .ok_or_else(|| Error::InvalidArgument(format!("no weight for component {comp:?}")))?;
        let r = S::from_u64(rank).ok_or_else(|| Error::InvalidArgument("rank not representable".into()))?;
        value = value + l.clone() * r;
    }
    Ok(value)
}

/// Evaluates the criterion on each summand of a caller-supplied decomposition
/// into indecomposables. The decomposition itself is not verified.
pub fn lifting_criterion<S: LiftScalar>(
    lambda: &BTreeMap<String, S>,
    summands: &[SummandDescriptor],
) -> Result<LiftingVerdict<S>> {
    let values = summands
        .iter()
        .map(|s| lifting_value(lambda, s))
        .collect::<Result<Vec<_>>>()?;
    let vanishing: Vec<bool> = values.iter().map(LiftScalar::vanishes).collect();
    let exists = vanishing.iter().all(|&v| v);
    Ok(LiftingVerdict {
        values,
        vanishing,
        exists,
    })
}

/// Component weights `λ_i` as a map usable by [`lifting_criterion`].
pub fn component_weights<T: Real>(gamma: &RiemannSurfaceQuiver<T>, weights: &WeightData<T>) -> BTreeMap<String, Complex<T>> {
    weights.component_lambdas(gamma)
}
