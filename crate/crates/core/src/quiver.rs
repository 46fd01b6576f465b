// SPDX-License-Identifier: Apache-2.0

//! Riemann surface quivers, their component quivers, weight data and the
//! eigenvalue sets `T` and `S = {e^{2πit} − 1 : t ∈ T}`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{to_c64, two_pi_i, Real};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDesc {
    pub id: String,
    pub genus: u32,
}

impl ComponentDesc {
    pub fn new(id: impl Into<String>, genus: u32) -> Self {
        Self { id: id.into(), genus }
    }

    pub fn sphere(id: impl Into<String>) -> Self {
        Self::new(id, 0)
    }

    /// Genus-zero components are modelled as the Riemann sphere.
    pub fn is_p1(&self) -> bool {
        self.genus == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkedPointDesc<T: Real> {
    pub id: String,
    pub component: String,
    /// Coordinate on the component; only the numerical module reads it.
    pub position: Complex<T>,
}

impl<T: Real> MarkedPointDesc<T> {
    pub fn new(id: impl Into<String>, component: impl Into<String>, position: Complex<T>) -> Self {
        Self {
            id: id.into(),
            component: component.into(),
            position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDesc {
    pub id: String,
    pub tail: String,
    pub head: String,
}

impl ArrowDesc {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
        }
    }
}

/// A quiver whose vertices form a Riemann surface with finitely many components.
/// Arrows join marked points.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannSurfaceQuiver<T: Real> {
    components: Vec<ComponentDesc>,
    marked_points: Vec<MarkedPointDesc<T>>,
    arrows: Vec<ArrowDesc>,
    point_index: BTreeMap<String, usize>,
    component_index: BTreeMap<String, usize>,
    arrow_index: BTreeMap<String, usize>,
}

fn index_ids<'a>(kind: &str, ids: impl Iterator<Item = &'a str>) -> Result<BTreeMap<String, usize>> {
    let mut map = BTreeMap::new();
    for (i, id) in ids.enumerate() {
        if map.insert(id.to_string(), i).is_some() {
            return Err(Error::InvalidQuiver(format!("duplicate {kind} id {id:?}")));
        }
    }
    Ok(map)
}

impl<T: Real> RiemannSurfaceQuiver<T> {
    pub fn new(
        components: Vec<ComponentDesc>,
        marked_points: Vec<MarkedPointDesc<T>>,
        arrows: Vec<ArrowDesc>,
    ) -> Result<Self> {
        let component_index = index_ids("component", components.iter().map(|c| c.id.as_str()))?;
        let point_index = index_ids("marked point", marked_points.iter().map(|p| p.id.as_str()))?;
        let arrow_index = index_ids("arrow", arrows.iter().map(|a| a.id.as_str()))?;
        for p in &marked_points {
            if !component_index.contains_key(&p.component) {
                return Err(Error::InvalidQuiver(format!(
                    "marked point {:?} references unknown component {:?}",
                    p.id, p.component
                )));
            }
            if !(p.position.re.is_finite() && p.position.im.is_finite()) {
                return Err(Error::InvalidQuiver(format!("marked point {:?} has a non-finite position", p.id)));
            }
        }
        for (i, p) in marked_points.iter().enumerate() {
            for q in &marked_points[i + 1..] {
                if p.component == q.component && p.position == q.position {
                    return Err(Error::InvalidQuiver(format!(
                        "marked points {:?} and {:?} share a position on component {:?}",
                        p.id, q.id, p.component
                    )));
                }
            }
        }
        for a in &arrows {
            for end in [&a.tail, &a.head] {
                if !point_index.contains_key(end) {
                    return Err(Error::InvalidQuiver(format!(
                        "arrow {:?} references unknown marked point {:?}",
                        a.id, end
                    )));
                }
            }
            if a.tail == a.head {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {:?} has the same marked point {:?} as head and tail",
                    a.id, a.tail
                )));
            }
        }
        Ok(Self {
            components,
            marked_points,
            arrows,
            point_index,
            component_index,
            arrow_index,
        })
    }

    pub fn components(&self) -> &[ComponentDesc] {
        &self.components
    }

    pub fn marked_points(&self) -> &[MarkedPointDesc<T>] {
        &self.marked_points
    }

    pub fn arrows(&self) -> &[ArrowDesc] {
        &self.arrows
    }

    pub fn component(&self, id: &str) -> Option<&ComponentDesc> {
        self.component_index.get(id).map(|&i| &self.components[i])
    }

    pub fn point(&self, id: &str) -> Option<&MarkedPointDesc<T>> {
        self.point_index.get(id).map(|&i| &self.marked_points[i])
    }

    pub fn arrow(&self, id: &str) -> Option<&ArrowDesc> {
        self.arrow_index.get(id).map(|&i| &self.arrows[i])
    }

    /// Component id `[p]` of a marked point. Panics on an unknown id.
    pub fn component_of(&self, point: &str) -> &str {
        &self.point(point).expect("known marked point").component
    }

    /// Marked points `D_i` lying on a component, in declaration order.
    pub fn points_on<'a>(&'a self, component: &'a str) -> impl Iterator<Item = &'a MarkedPointDesc<T>> + 'a {
        self.marked_points.iter().filter(move |p| p.component == component)
    }

    pub fn arrows_with_tail<'a>(&'a self, point: &'a str) -> impl Iterator<Item = &'a ArrowDesc> + 'a {
        self.arrows.iter().filter(move |a| a.tail == point)
    }

    pub fn arrows_with_head<'a>(&'a self, point: &'a str) -> impl Iterator<Item = &'a ArrowDesc> + 'a {
        self.arrows.iter().filter(move |a| a.head == point)
    }

    /// Number of arrow incidences (as head or tail) at each marked point.
    pub fn incidences(&self) -> BTreeMap<&str, usize> {
        let mut counts: BTreeMap<&str, usize> = self.marked_points.iter().map(|p| (p.id.as_str(), 0)).collect();
        for a in &self.arrows {
            *counts.get_mut(a.tail.as_str()).unwrap() += 1;
            *counts.get_mut(a.head.as_str()).unwrap() += 1;
        }
        counts
    }

    /// True iff every marked point is the endpoint of exactly one arrow incidence.
    pub fn is_non_interfering(&self) -> bool {
        self.incidences().values().all(|&n| n == 1)
    }

    pub fn is_p1_type(&self) -> bool {
        self.components.iter().all(ComponentDesc::is_p1)
    }

    pub fn unused_points(&self) -> Vec<&str> {
        self.incidences()
            .into_iter()
            .filter(|&(_, n)| n == 0)
            .map(|(p, _)| p)
            .collect()
    }

    /// Checks the hypotheses of the transform: non-interfering arrows, every
    /// marked point used, all components of genus zero.
    pub fn require_p1_non_interfering(&self) -> Result<()> {
        if let Some(p) = self.unused_points().first() {
            return Err(Error::InvalidQuiver(format!("marked point {p:?} is not an arrow endpoint")));
        }
        if !self.is_non_interfering() {
            return Err(Error::RequiresNonInterfering);
        }
        for c in &self.components {
            if !c.is_p1() {
                return Err(Error::GenusNotZero {
                    component: c.id.clone(),
                    genus: c.genus,
                });
            }
        }
        Ok(())
    }

    pub fn component_quiver(&self) -> ComponentQuiver {
        let vertices: Vec<String> = self.components.iter().map(|c| c.id.clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| ComponentArrow {
                id: a.id.clone(),
                tail: self.component_index[self.component_of(&a.tail)],
                head: self.component_index[self.component_of(&a.head)],
            })
            .collect();
        ComponentQuiver { vertices, arrows }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentArrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// Ordinary finite quiver: vertices are the components, one arrow `[p] → [q]`
/// per arrow `p → q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<ComponentArrow>,
}

impl ComponentQuiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Realizes the quiver as a genus-zero Riemann surface quiver with
    /// non-interfering arrows: arrow `a: i → j` gets a tail point `a.t` on `i`
    /// and a head point `a.h` on `j`, placed at distinct positions.
    pub fn realize<T: Real>(&self) -> RiemannSurfaceQuiver<T> {
        let components = self.vertices.iter().map(ComponentDesc::sphere).collect();
        let mut slots = vec![0usize; self.vertices.len()];
        let mut next_position = |v: usize| {
            slots[v] += 1;
            Complex::new(T::from_usize_lossy(slots[v]), T::zero())
        };
        let mut points = Vec::new();
        let mut arrows = Vec::new();
        for a in &self.arrows {
            let tail = format!("{}.t", a.id);
            let head = format!("{}.h", a.id);
            points.push(MarkedPointDesc::new(tail.clone(), self.vertices[a.tail].clone(), next_position(a.tail)));
            points.push(MarkedPointDesc::new(head.clone(), self.vertices[a.head].clone(), next_position(a.head)));
            arrows.push(ArrowDesc::new(a.id.clone(), tail, head));
        }
        RiemannSurfaceQuiver::new(components, points, arrows).expect("realization is valid by construction")
    }
}

/// Scalars `λ_p` attached to the marked points.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData<T: Real> {
    lambda: BTreeMap<String, Complex<T>>,
}

impl<T: Real> WeightData<T> {
    /// Validates that the weights are defined on exactly the marked points.
    pub fn new(gamma: &RiemannSurfaceQuiver<T>, lambda: BTreeMap<String, Complex<T>>) -> Result<Self> {
        let points: BTreeSet<&str> = gamma.marked_points().iter().map(|p| p.id.as_str()).collect();
        let keys: BTreeSet<&str> = lambda.keys().map(String::as_str).collect();
        if let Some(missing) = points.difference(&keys).next() {
            return Err(Error::InvalidQuiver(format!("no weight for marked point {missing:?}")));
        }
        if let Some(extra) = keys.difference(&points).next() {
            return Err(Error::InvalidQuiver(format!("weight given for unknown marked point {extra:?}")));
        }
        Ok(Self { lambda })
    }

    pub fn zero(gamma: &RiemannSurfaceQuiver<T>) -> Self {
        Self {
            lambda: gamma
                .marked_points()
                .iter()
                .map(|p| (p.id.clone(), Complex::zero()))
                .collect(),
        }
    }

    pub fn as_map(&self) -> &BTreeMap<String, Complex<T>> {
        &self.lambda
    }

    pub fn lambda(&self, point: &str) -> Complex<T> {
        self.lambda[point]
    }

    /// `λ_i = Σ_{p ∈ D_i} λ_p`.
    pub fn lambda_component(&self, gamma: &RiemannSurfaceQuiver<T>, component: &str) -> Complex<T> {
        gamma.points_on(component).map(|p| self.lambda[&p.id]).sum()
    }

    /// `σ_p = e^{2πiλ_p}`.
    pub fn sigma(&self, point: &str) -> Complex<T> {
        (two_pi_i::<T>() * self.lambda[point]).exp()
    }

    /// `q_i = e^{2πiλ_i}`.
    pub fn q(&self, gamma: &RiemannSurfaceQuiver<T>, component: &str) -> Complex<T> {
        (two_pi_i::<T>() * self.lambda_component(gamma, component)).exp()
    }

    /// All `λ_i` keyed by component id.
    pub fn component_lambdas(&self, gamma: &RiemannSurfaceQuiver<T>) -> BTreeMap<String, Complex<T>> {
        gamma
            .components()
            .iter()
            .map(|c| (c.id.clone(), self.lambda_component(gamma, &c.id)))
            .collect()
    }
}

/// Tolerance used when deciding whether two members of `T` differ by an integer.
const RESONANCE_TOL: f64 = 1e-12;

/// Non-resonant eigenvalue set `T` containing 0.
#[derive(Clone, Debug, PartialEq)]
pub enum EigenvalueSet<T: Real> {
    ZeroOnly,
    /// `{z : 0 ≤ Re z < 1}`.
    HalfOpenStrip,
    ExplicitFinite(Vec<Complex<T>>),
}

fn differ_by_nonzero_integer<T: Real>(a: Complex<T>, b: Complex<T>) -> bool {
    let d = a - b;
    let tol = T::lit(RESONANCE_TOL);
    let k = d.re.round();
    d.im.abs() <= tol && (d.re - k).abs() <= tol && !k.is_zero()
}

impl<T: Real> EigenvalueSet<T> {
    /// Checks `0 ∈ T` and non-resonance.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::ZeroOnly | Self::HalfOpenStrip => Ok(()),
            Self::ExplicitFinite(ts) => {
                let tol = T::lit(RESONANCE_TOL);
                if !ts.iter().any(|t| t.norm() <= tol) {
                    return Err(Error::MissingZero);
                }
                for (i, a) in ts.iter().enumerate() {
                    for b in &ts[i + 1..] {
                        if differ_by_nonzero_integer(*a, *b) {
                            return Err(Error::ResonantSet {
                                a: to_c64(*a),
                                b: to_c64(*b),
                            });
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Distance from `z` to `T` (to the closed strip for `HalfOpenStrip`).
    pub fn distance(&self, z: Complex<T>) -> T {
        match self {
            Self::ZeroOnly => z.norm(),
            Self::HalfOpenStrip => T::zero().max(-z.re).max(z.re - T::one()),
            Self::ExplicitFinite(ts) => ts.iter().map(|t| (z - *t).norm()).fold(T::infinity(), T::min),
        }
    }

    pub fn contains(&self, z: Complex<T>, tol: T) -> bool {
        self.distance(z) <= tol
    }

    /// The set `S` in multiplicative coordinates.
    pub fn to_s(&self) -> Result<SSet<T>> {
        self.validate()?;
        Ok(match self {
            Self::ZeroOnly => SSet::Zero,
            Self::HalfOpenStrip => SSet::Strip,
            Self::ExplicitFinite(ts) => {
                let mut seen: Vec<Complex<T>> = Vec::new();
                let mut pairs = Vec::new();
                for t in ts {
                    if seen.iter().any(|u| (*u - *t).norm() <= T::lit(RESONANCE_TOL)) {
                        continue;
                    }
                    seen.push(*t);
                    pairs.push(Branch {
                        t: *t,
                        s: (two_pi_i::<T>() * *t).exp() - Complex::new(T::one(), T::zero()),
                    });
                }
                SSet::Finite(pairs)
            }
        })
    }
}

/// A member `t ∈ T` with its image `s = e^{2πit} − 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch<T: Real> {
    pub t: Complex<T>,
    pub s: Complex<T>,
}

/// `S = {e^{2πit} − 1 : t ∈ T}`.
#[derive(Clone, Debug, PartialEq)]
pub enum SSet<T: Real> {
    Zero,
    /// Image of the half-open strip: every complex number except −1.
    Strip,
    Finite(Vec<Branch<T>>),
}

impl<T: Real> SSet<T> {
    pub fn distance(&self, s: Complex<T>) -> T {
        match self {
            Self::Zero => s.norm(),
            Self::Strip => {
                if (s + Complex::new(T::one(), T::zero())).norm().is_zero() {
                    T::infinity()
                } else {
                    T::zero()
                }
            }
            Self::Finite(bs) => bs.iter().map(|b| (s - b.s).norm()).fold(T::infinity(), T::min),
        }
    }

    pub fn contains(&self, s: Complex<T>, tol: T) -> bool {
        match self {
            Self::Strip => (s + Complex::new(T::one(), T::zero())).norm() > tol,
            _ => self.distance(s) <= tol,
        }
    }

    pub fn members(&self) -> Option<Vec<Complex<T>>> {
        match self {
            Self::Zero => Some(vec![Complex::zero()]),
            Self::Strip => None,
            Self::Finite(bs) => Some(bs.iter().map(|b| b.s).collect()),
        }
    }

    /// The unique `t ∈ T` with `e^{2πit} = 1 + s`.
    ///
    /// For the strip, values of `Re t` within `tol` below 1 are taken on the
    /// `Re t ≈ 0` side so that perturbations of 0 stay on the branch through 0.
    pub fn branch(&self, s: Complex<T>, tol: T) -> Result<Complex<T>> {
        match self {
            Self::Zero => {
                if s.norm() <= tol {
                    Ok(Complex::zero())
                } else {
                    Err(Error::SpectrumOutsideS { eigenvalue: to_c64(s) })
                }
            }
            Self::Strip => strip_branch(s, tol),
            Self::Finite(bs) => {
                let mut hits = bs.iter().filter(|b| (s - b.s).norm() <= tol);
                match (hits.next(), hits.next()) {
                    (Some(b), None) => Ok(b.t),
                    (Some(_), Some(_)) => Err(Error::BranchAmbiguity { eigenvalue: to_c64(s) }),
                    (None, _) => Err(Error::SpectrumOutsideS { eigenvalue: to_c64(s) }),
                }
            }
        }
    }
}

fn strip_branch<T: Real>(s: Complex<T>, tol: T) -> Result<Complex<T>> {
    let w = s + Complex::new(T::one(), T::zero());
    if w.norm() <= tol {
        return Err(Error::SpectrumOutsideS { eigenvalue: to_c64(s) });
    }
    let two_pi = T::two_pi();
    let mut re = w.arg() / two_pi;
    if re < -tol {
        re += T::one();
    }
    Ok(Complex::new(re, -w.norm().ln() / two_pi))
}
