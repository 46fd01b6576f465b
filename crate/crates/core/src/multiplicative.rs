// SPDX-License-Identifier: Apache-2.0

//! Multiplicative side: local monodromies, genus generators and arrow maps,
//! with the arrow relations, the multiplicative preprojective vertex relation
//! and the surface group relation.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::One;

use crate::additive::{check_keys, check_shape};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matfun::spectrum_or_nilpotent;
use crate::quiver::{EigenvalueSet, RiemannSurfaceQuiver, WeightData};
use crate::report::{CheckEntry, CheckReport};
use crate::scalar::Real;

/// A factor counts as singular when `σ_min < SINGULAR_TOL · σ_max`.
pub const SINGULAR_TOL: f64 = 1e-10;

/// `(e_j, e_j^*)` for one genus generator pair; `ρ(u_j) = e_j`, `ρ(v_j) = e_j^{-1} + e_j^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusPair<T: Real> {
    pub e: Matrix<T>,
    pub e_star: Matrix<T>,
}

/// `ρ_a: V_i → V_j` and `ρ_a^*: V_j → V_i` for an arrow `a: p → q`, `i = [p]`, `j = [q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativeArrow<T: Real> {
    pub rho: Matrix<T>,
    pub rho_star: Matrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyRep<T: Real> {
    pub dims: BTreeMap<String, usize>,
    /// `ρ_i(ℓ_p)` per marked point.
    pub point_monodromies: BTreeMap<String, Matrix<T>>,
    /// Genus pairs per component; components of genus 0 may be omitted.
    pub genus: BTreeMap<String, Vec<GenusPair<T>>>,
    pub arrows: BTreeMap<String, MultiplicativeArrow<T>>,
}

pub fn is_singular<T: Real>(m: &Matrix<T>) -> bool {
    !m.is_empty() && m.inverse_condition() < T::lit(SINGULAR_TOL)
}

fn invert_factor<T: Real>(m: &Matrix<T>, name: impl FnOnce() -> String) -> Result<Matrix<T>> {
    if is_singular(m) {
        return Err(Error::SingularFactor { factor: name() });
    }
    m.inverse().ok_or_else(|| Error::SingularFactor { factor: "unnamed".into() })
}

impl<T: Real> MonodromyRep<T> {
    pub fn validate(&self, gamma: &RiemannSurfaceQuiver<T>) -> Result<()> {
        check_keys("dims", &self.dims, gamma.components().iter().map(|c| c.id.as_str()))?;
        check_keys(
            "point_monodromies",
            &self.point_monodromies,
            gamma.marked_points().iter().map(|p| p.id.as_str()),
        )?;
        check_keys("arrows", &self.arrows, gamma.arrows().iter().map(|a| a.id.as_str()))?;
        for (comp, pairs) in &self.genus {
            let desc = gamma
                .component(comp)
                .ok_or_else(|| Error::ShapeMismatch(format!("genus: unknown component {comp:?}")))?;
            if pairs.len() != desc.genus as usize {
                return Err(Error::ShapeMismatch(format!(
                    "genus: component {comp:?} has genus {} but {} pairs",
                    desc.genus,
                    pairs.len()
                )));
            }
            let d = self.dims[comp];
            for (j, pair) in pairs.iter().enumerate() {
                check_shape(&format!("e_{} on {comp}", j + 1), &pair.e, d, d)?;
                check_shape(&format!("e*_{} on {comp}", j + 1), &pair.e_star, d, d)?;
            }
        }
        for c in gamma.components() {
            if c.genus > 0 && !self.genus.contains_key(&c.id) {
                return Err(Error::ShapeMismatch(format!("genus: no pairs for component {:?}", c.id)));
            }
        }
        for p in gamma.marked_points() {
            let d = self.dims[&p.component];
            check_shape(&format!("monodromy at {}", p.id), &self.point_monodromies[&p.id], d, d)?;
        }
        for a in gamma.arrows() {
            let m = self.dims[gamma.component_of(&a.tail)];
            let n = self.dims[gamma.component_of(&a.head)];
            let maps = &self.arrows[&a.id];
            check_shape(&format!("rho at arrow {}", a.id), &maps.rho, n, m)?;
            check_shape(&format!("rho_star at arrow {}", a.id), &maps.rho_star, m, n)?;
        }
        Ok(())
    }

    fn monodromy_inverse(&self, point: &str) -> Result<Matrix<T>> {
        let m = &self.point_monodromies[point];
        if is_singular(m) {
            return Err(Error::SingularMonodromy { point: point.into() });
        }
        m.inverse().ok_or_else(|| Error::SingularMonodromy { point: point.into() })
    }

    fn genus_pairs(&self, component: &str) -> &[GenusPair<T>] {
        self.genus.get(component).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Arrow relations `σ_p^{-1}ρ(ℓ_p)^{-1} = 1 + ρ_a^*ρ_a` and `σ_qρ(ℓ_q) = 1 + ρ_aρ_a^*`,
/// one entry per marked point (labelled by point id).
pub fn check_arrow_relations<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    mrep: &MonodromyRep<T>,
    tol: T,
) -> Result<CheckReport> {
    if !gamma.is_non_interfering() {
        return Err(Error::RequiresNonInterfering);
    }
    mrep.validate(gamma)?;
    let tol = tol.to_f64_lossy();
    let mut report = CheckReport::new();
    for a in gamma.arrows() {
        let maps = &mrep.arrows[&a.id];
        let tail_inv = mrep.monodromy_inverse(&a.tail)?;
        mrep.monodromy_inverse(&a.head)?;
        let lhs_p = tail_inv.scale(weights.sigma(&a.tail).inv());
        let rhs_p = (&maps.rho_star * &maps.rho).shift(Complex::one());
        report.push(a.tail.clone(), lhs_p.dist(&rhs_p).to_f64_lossy(), tol);
        let lhs_q = mrep.point_monodromies[&a.head].scale(weights.sigma(&a.head));
        let rhs_q = (&maps.rho * &maps.rho_star).shift(Complex::one());
        report.push(a.head.clone(), lhs_q.dist(&rhs_q).to_f64_lossy(), tol);
    }
    Ok(report)
}

/// Factor order at one component: arrows with head on the component, then
/// arrows with tail on it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexOrder {
    pub heads: Vec<String>,
    pub tails: Vec<String>,
}

/// Default order: arrows sorted by id within heads and within tails.
pub fn default_vertex_order<T: Real>(gamma: &RiemannSurfaceQuiver<T>, component: &str) -> VertexOrder {
    let mut heads: Vec<String> = gamma
        .arrows()
        .iter()
        .filter(|a| gamma.component_of(&a.head) == component)
        .map(|a| a.id.clone())
        .collect();
    let mut tails: Vec<String> = gamma
        .arrows()
        .iter()
        .filter(|a| gamma.component_of(&a.tail) == component)
        .map(|a| a.id.clone())
        .collect();
    heads.sort();
    tails.sort();
    VertexOrder { heads, tails }
}

fn validate_order<T: Real>(gamma: &RiemannSurfaceQuiver<T>, component: &str, order: &VertexOrder) -> Result<()> {
    let expected = default_vertex_order(gamma, component);
    let mut heads = order.heads.clone();
    let mut tails = order.tails.clone();
    heads.sort();
    tails.sort();
    if heads != expected.heads || tails != expected.tails {
        return Err(Error::InvalidArgument(format!(
            "arrow order at {component:?} must list heads {:?} and tails {:?}",
            expected.heads, expected.tails
        )));
    }
    Ok(())
}

/// `Π_j (1 + e_je_j^*)(1 + e_j^*e_j)^{-1}`.
fn genus_product<T: Real>(component: &str, pairs: &[GenusPair<T>], d: usize) -> Result<Matrix<T>> {
    let mut acc = Matrix::identity(d);
    for (j, pair) in pairs.iter().enumerate() {
        let num = (&pair.e * &pair.e_star).shift(Complex::one());
        let den = (&pair.e_star * &pair.e).shift(Complex::one());
        let den_inv = invert_factor(&den, || format!("1 + e*_{} e_{} at {component}", j + 1, j + 1))?;
        acc = &(&acc * &num) * &den_inv;
    }
    Ok(acc)
}

/// Left-hand side of the vertex relation at one component.
pub fn mpa_vertex_product<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    mrep: &MonodromyRep<T>,
    component: &str,
    order: &VertexOrder,
) -> Result<Matrix<T>> {
    validate_order(gamma, component, order)?;
    let d = mrep.dims[component];
    let mut acc = genus_product(component, mrep.genus_pairs(component), d)?;
    for id in &order.heads {
        let m = &mrep.arrows[id];
        acc = &acc * &(&m.rho * &m.rho_star).shift(Complex::one());
    }
    for id in &order.tails {
        let m = &mrep.arrows[id];
        let f = (&m.rho_star * &m.rho).shift(Complex::one());
        acc = &acc * &invert_factor(&f, || format!("1 + rho*_{id} rho_{id}"))?;
    }
    Ok(acc)
}

/// Vertex relation `LHS_i = q_i·1` per component. `orders` overrides the
/// default factor order for the components it names.
pub fn check_mpa_vertex_relation<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    weights: &WeightData<T>,
    mrep: &MonodromyRep<T>,
    orders: Option<&BTreeMap<String, VertexOrder>>,
    tol: T,
) -> Result<CheckReport> {
    mrep.validate(gamma)?;
    let mut report = CheckReport::new();
    for c in gamma.components() {
        let order = orders
            .and_then(|o| o.get(&c.id).cloned())
            .unwrap_or_else(|| default_vertex_order(gamma, &c.id));
        let lhs = mpa_vertex_product(gamma, mrep, &c.id, &order).map_err(|e| e.at(format!("component {}", c.id)))?;
        let target = Matrix::scalar(mrep.dims[&c.id], weights.q(gamma, &c.id));
        report.push(c.id.clone(), lhs.dist(&target).to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// For each arrow, the distance from the spectrum of `ρ_a^*ρ_a` (or `ρ_aρ_a^*`
/// if smaller) to `S`.
pub fn check_eigenvalues_in_s<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    mrep: &MonodromyRep<T>,
    t: &EigenvalueSet<T>,
    tol: T,
) -> Result<CheckReport> {
    mrep.validate(gamma)?;
    let s = t.to_s()?;
    let mut report = CheckReport::new();
    for a in gamma.arrows() {
        let m = &mrep.arrows[&a.id];
        let product = if m.rho.cols() <= m.rho.rows() {
            &m.rho_star * &m.rho
        } else {
            &m.rho * &m.rho_star
        };
        let spec = spectrum_or_nilpotent(&product).map_err(|e| e.at(format!("arrow {}", a.id)))?;
        let worst = spec.eigenvalues.iter().map(|&z| s.distance(z)).fold(T::zero(), |acc, d| acc.max(d));
        report.push(a.id.clone(), worst.to_f64_lossy(), tol.to_f64_lossy());
    }
    Ok(report)
}

/// Loop order matching the default factor order: head points of the head
/// arrows, then tail points of the tail arrows, then unused points.
pub fn default_loop_order<T: Real>(gamma: &RiemannSurfaceQuiver<T>, component: &str) -> Vec<String> {
    let order = default_vertex_order(gamma, component);
    let mut points: Vec<String> = Vec::new();
    for id in &order.heads {
        let p = &gamma.arrow(id).expect("arrow id from quiver").head;
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    for id in &order.tails {
        let p = &gamma.arrow(id).expect("arrow id from quiver").tail;
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    for p in gamma.points_on(component) {
        if !points.contains(&p.id) {
            points.push(p.id.clone());
        }
    }
    points
}

/// `Π_j [ρ(u_j), ρ(v_j)] · Π_k ρ(ℓ_k)` at one component.
pub fn surface_group_product<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    mrep: &MonodromyRep<T>,
    component: &str,
    loops: &[String],
) -> Result<Matrix<T>> {
    let d = mrep.dims[component];
    let mut acc = Matrix::identity(d);
    for (j, pair) in mrep.genus_pairs(component).iter().enumerate() {
        let u = &pair.e;
        let u_inv = invert_factor(u, || format!("e_{} at {component}", j + 1))?;
        let v = &u_inv + &pair.e_star;
        let v_inv = invert_factor(&v, || format!("e_{}^-1 + e*_{} at {component}", j + 1, j + 1))?;
        acc = &(&(&(&acc * u) * &v) * &u_inv) * &v_inv;
    }
    for p in loops {
        if gamma.point(p).map(|d| d.component.as_str()) != Some(component) {
            return Err(Error::InvalidArgument(format!("point {p:?} is not on component {component:?}")));
        }
        mrep.monodromy_inverse(p)?;
        acc = &acc * &mrep.point_monodromies[p];
    }
    Ok(acc)
}

/// Surface group relation at one component; `loops` defaults to [`default_loop_order`].
pub fn surface_group_relation_check<T: Real>(
    gamma: &RiemannSurfaceQuiver<T>,
    mrep: &MonodromyRep<T>,
    component: &str,
    loops: Option<&[String]>,
    tol: T,
) -> Result<CheckEntry> {
    mrep.validate(gamma)?;
    if gamma.component(component).is_none() {
        return Err(Error::InvalidArgument(format!("unknown component {component:?}")));
    }
    let default;
    let loops = match loops {
        Some(l) => l,
        None => {
            default = default_loop_order(gamma, component);
            &default
        }
    };
    if loops.len() != gamma.points_on(component).count() {
        return Err(Error::InvalidArgument(format!(
            "loop order at {component:?} must list every marked point once"
        )));
    }
    let prod = surface_group_product(gamma, mrep, component, loops)?;
    let defect = prod.dist(&Matrix::identity(prod.rows())).to_f64_lossy();
    Ok(CheckEntry {
        label: component.to_string(),
        defect,
        passed: defect <= tol.to_f64_lossy(),
    })
}
