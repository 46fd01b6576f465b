// SPDX-License-Identifier: Apache-2.0

//! JSON file formats. Complex numbers are `[re, im]`; matrices are
//! `{"rows": r, "cols": c, "entries": [[re, im], ...]}` in row-major order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::additive::{residues_from_arrows, AdditiveArrow, ConnectionSystemRep, SummandDescriptor};
use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianSystem, Loop, Pole, SystemModel};
use crate::linalg::Matrix;
use crate::multiplicative::{GenusPair, MonodromyRep, MultiplicativeArrow};
use crate::quiver::{ArrowDesc, ComponentDesc, EigenvalueSet, MarkedPointDesc, RiemannSurfaceQuiver, WeightData};

pub type ComplexJson = [f64; 2];

pub fn complex_from_json(z: ComplexJson) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn complex_to_json(z: Complex64) -> ComplexJson {
    [z.re, z.im]
}

/// Parses JSON text, reporting syntax and schema errors with line and column.
pub fn parse<V: DeserializeOwned>(text: &str) -> Result<V> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit<V: Serialize>(value: &V) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ComplexJson>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix<f64>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.iter().map(|&z| complex_to_json(z)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>> {
        let data = self.entries.iter().map(|&z| complex_from_json(z)).collect();
        Matrix::from_vec(self.rows, self.cols, data).ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            ))
        })
    }
}

fn matrices_to_model(what: &str, map: &BTreeMap<String, MatrixJson>) -> Result<BTreeMap<String, Matrix<f64>>> {
    map.iter()
        .map(|(k, m)| Ok((k.clone(), m.to_matrix().map_err(|e| e.at(format!("{what} {k}")))?)))
        .collect()
}

fn matrices_to_json(map: &BTreeMap<String, Matrix<f64>>) -> BTreeMap<String, MatrixJson> {
    map.iter().map(|(k, m)| (k.clone(), MatrixJson::from_matrix(m))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedPointJson {
    pub id: String,
    pub component: String,
    /// Defaults to `k + 1` for the `k`-th point on its component.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<ComplexJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub tail: String,
    pub head: String,
}

/// Riemann surface quiver with optional weights `λ_p` (missing points get 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub components: Vec<ComponentJson>,
    pub marked_points: Vec<MarkedPointJson>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lambda: BTreeMap<String, ComplexJson>,
}

impl QuiverFile {
    pub fn to_model(&self) -> Result<(RiemannSurfaceQuiver<f64>, WeightData<f64>)> {
        let components = self.components.iter().map(|c| ComponentDesc::new(c.id.clone(), c.genus)).collect();
        let mut slots: BTreeMap<&str, usize> = BTreeMap::new();
        let points = self
            .marked_points
            .iter()
            .map(|p| {
                let slot = slots.entry(p.component.as_str()).or_insert(0);
                *slot += 1;
                let pos = p.position.map_or(Complex64::new(*slot as f64, 0.0), complex_from_json);
                MarkedPointDesc::new(p.id.clone(), p.component.clone(), pos)
            })
            .collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| ArrowDesc::new(a.id.clone(), a.tail.clone(), a.head.clone()))
            .collect();
        let gamma = RiemannSurfaceQuiver::new(components, points, arrows)?;
        let mut lambda: BTreeMap<String, Complex64> = gamma
            .marked_points()
            .iter()
            .map(|p| (p.id.clone(), Complex64::new(0.0, 0.0)))
            .collect();
        for (p, &z) in &self.lambda {
            if !lambda.contains_key(p) {
                return Err(Error::InvalidQuiver(format!("weight given for unknown marked point {p:?}")));
            }
            lambda.insert(p.clone(), complex_from_json(z));
        }
        let weights = WeightData::new(&gamma, lambda)?;
        Ok((gamma, weights))
    }

    pub fn from_model(gamma: &RiemannSurfaceQuiver<f64>, weights: &WeightData<f64>) -> Self {
        Self {
            components: gamma
                .components()
                .iter()
                .map(|c| ComponentJson {
                    id: c.id.clone(),
                    genus: c.genus,
                })
                .collect(),
            marked_points: gamma
                .marked_points()
                .iter()
                .map(|p| MarkedPointJson {
                    id: p.id.clone(),
                    component: p.component.clone(),
                    position: Some(complex_to_json(p.position)),
                })
                .collect(),
            arrows: gamma
                .arrows()
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    tail: a.tail.clone(),
                    head: a.head.clone(),
                })
                .collect(),
            lambda: weights
                .as_map()
                .iter()
                .filter(|(_, z)| z.norm() != 0.0)
                .map(|(k, &z)| (k.clone(), complex_to_json(z)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditiveArrowJson {
    pub e: MatrixJson,
    pub nabla: MatrixJson,
}

/// Connection system. Without `residues`, they are completed from the arrow
/// data through the residue relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residues: Option<BTreeMap<String, MatrixJson>>,
    pub arrows: BTreeMap<String, AdditiveArrowJson>,
}

impl RepFile {
    pub fn to_model(&self, gamma: &RiemannSurfaceQuiver<f64>, weights: &WeightData<f64>) -> Result<ConnectionSystemRep<f64>> {
        let arrows = self
            .arrows
            .iter()
            .map(|(k, a)| {
                let at = |e: Error| e.at(format!("arrow {k}"));
                Ok((
                    k.clone(),
                    AdditiveArrow {
                        e: a.e.to_matrix().map_err(at)?,
                        nabla: a.nabla.to_matrix().map_err(at)?,
                    },
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let rep = match &self.residues {
            Some(res) => ConnectionSystemRep {
                dims: self.dims.clone(),
                residues: matrices_to_model("residue", res)?,
                arrows,
            },
            None => residues_from_arrows(gamma, weights, self.dims.clone(), arrows)?,
        };
        rep.validate(gamma)?;
        Ok(rep)
    }

    pub fn from_model(rep: &ConnectionSystemRep<f64>) -> Self {
        Self {
            dims: rep.dims.clone(),
            residues: Some(matrices_to_json(&rep.residues)),
            arrows: rep
                .arrows
                .iter()
                .map(|(k, a)| {
                    (
                        k.clone(),
                        AdditiveArrowJson {
                            e: MatrixJson::from_matrix(&a.e),
                            nabla: MatrixJson::from_matrix(&a.nabla),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenusPairJson {
    pub e: MatrixJson,
    pub e_star: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicativeArrowJson {
    pub rho: MatrixJson,
    pub rho_star: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyRepFile {
    pub dims: BTreeMap<String, usize>,
    pub point_monodromies: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub genus: BTreeMap<String, Vec<GenusPairJson>>,
    pub arrows: BTreeMap<String, MultiplicativeArrowJson>,
}

impl MonodromyRepFile {
    pub fn to_model(&self, gamma: &RiemannSurfaceQuiver<f64>) -> Result<MonodromyRep<f64>> {
        let genus = self
            .genus
            .iter()
            .map(|(c, pairs)| {
                let pairs = pairs
                    .iter()
                    .map(|p| {
                        Ok(GenusPair {
                            e: p.e.to_matrix()?,
                            e_star: p.e_star.to_matrix()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| e.at(format!("genus pairs on {c}")))?;
                Ok((c.clone(), pairs))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let arrows = self
            .arrows
            .iter()
            .map(|(k, a)| {
                let at = |e: Error| e.at(format!("arrow {k}"));
                Ok((
                    k.clone(),
                    MultiplicativeArrow {
                        rho: a.rho.to_matrix().map_err(at)?,
                        rho_star: a.rho_star.to_matrix().map_err(at)?,
                    },
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mrep = MonodromyRep {
            dims: self.dims.clone(),
            point_monodromies: matrices_to_model("monodromy", &self.point_monodromies)?,
            genus,
            arrows,
        };
        mrep.validate(gamma)?;
        Ok(mrep)
    }

    pub fn from_model(mrep: &MonodromyRep<f64>) -> Self {
        Self {
            dims: mrep.dims.clone(),
            point_monodromies: matrices_to_json(&mrep.point_monodromies),
            genus: mrep
                .genus
                .iter()
                .map(|(c, pairs)| {
                    (
                        c.clone(),
                        pairs
                            .iter()
                            .map(|p| GenusPairJson {
                                e: MatrixJson::from_matrix(&p.e),
                                e_star: MatrixJson::from_matrix(&p.e_star),
                            })
                            .collect(),
                    )
                })
                .collect(),
            arrows: mrep
                .arrows
                .iter()
                .map(|(k, a)| {
                    (
                        k.clone(),
                        MultiplicativeArrowJson {
                            rho: MatrixJson::from_matrix(&a.rho),
                            rho_star: MatrixJson::from_matrix(&a.rho_star),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleJson {
    pub position: ComplexJson,
    pub residue: MatrixJson,
}

fn default_model() -> SystemModel {
    SystemModel::Sphere
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub dim: usize,
    #[serde(default = "default_model")]
    pub model: SystemModel,
    pub poles: Vec<PoleJson>,
}

impl SystemFile {
    pub fn to_model(&self) -> Result<FuchsianSystem<f64>> {
        let poles = self
            .poles
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok(Pole {
                    position: complex_from_json(p.position),
                    residue: p.residue.to_matrix().map_err(|e| e.at(format!("pole {k}")))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FuchsianSystem::new(self.dim, poles, self.model)
    }

    pub fn from_model(system: &FuchsianSystem<f64>) -> Self {
        Self {
            dim: system.dim(),
            model: system.model(),
            poles: system
                .poles()
                .iter()
                .map(|p| PoleJson {
                    position: complex_to_json(p.position),
                    residue: MatrixJson::from_matrix(&p.residue),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum LoopFile {
    Circle {
        center: ComplexJson,
        radius: f64,
        #[serde(default)]
        basepoint_angle: f64,
        /// Clockwise instead of counterclockwise.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        reversed: bool,
    },
    Polyline {
        vertices: Vec<ComplexJson>,
    },
    Keyhole {
        base: ComplexJson,
        pole: ComplexJson,
        radius: f64,
    },
}

impl LoopFile {
    pub fn to_model(&self) -> Result<Loop<f64>> {
        match self {
            LoopFile::Circle {
                center,
                radius,
                basepoint_angle,
                reversed,
            } => {
                let lp = Loop::circle(complex_from_json(*center), *radius, *basepoint_angle)?;
                Ok(if *reversed { lp.reversed() } else { lp })
            }
            LoopFile::Polyline { vertices } => {
                let v: Vec<Complex64> = vertices.iter().map(|&z| complex_from_json(z)).collect();
                Loop::polyline(&v)
            }
            LoopFile::Keyhole { base, pole, radius } => {
                Loop::keyhole(complex_from_json(*base), complex_from_json(*pole), *radius)
            }
        }
    }
}

/// Non-resonant set `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TFile {
    Zero,
    Strip,
    Finite { values: Vec<ComplexJson> },
}

impl TFile {
    pub fn to_model(&self) -> Result<EigenvalueSet<f64>> {
        let t = match self {
            TFile::Zero => EigenvalueSet::ZeroOnly,
            TFile::Strip => EigenvalueSet::HalfOpenStrip,
            TFile::Finite { values } => EigenvalueSet::ExplicitFinite(values.iter().map(|&z| complex_from_json(z)).collect()),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn from_model(t: &EigenvalueSet<f64>) -> Self {
        match t {
            EigenvalueSet::ZeroOnly => TFile::Zero,
            EigenvalueSet::HalfOpenStrip => TFile::Strip,
            EigenvalueSet::ExplicitFinite(v) => TFile::Finite {
                values: v.iter().map(|&z| complex_to_json(z)).collect(),
            },
        }
    }
}

/// Weight `λ_i`: an integer or a `"p/q"` string is exact; a float or
/// `[re, im]` pair switches the whole evaluation to floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaJson {
    Exact(String),
    Number(serde_json::Number),
    Complex(ComplexJson),
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl LambdaJson {
    pub fn exact(&self) -> Result<Option<Rational64>> {
        match self {
            LambdaJson::Exact(s) => parse_rational(s).map(Some),
            LambdaJson::Number(n) => Ok(n.as_i64().map(Rational64::from_integer)),
            LambdaJson::Complex(_) => Ok(None),
        }
    }

    pub fn complex(&self) -> Result<Complex64> {
        match self {
            LambdaJson::Exact(s) => {
                let r = parse_rational(s)?;
                Ok(Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0))
            }
            LambdaJson::Number(n) => n
                .as_f64()
                .map(|x| Complex64::new(x, 0.0))
                .ok_or_else(|| Error::InvalidArgument(format!("not a finite number: {n}"))),
            LambdaJson::Complex(z) => Ok(complex_from_json(*z)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandJson {
    #[serde(default)]
    pub ranks: BTreeMap<String, u64>,
    #[serde(default)]
    pub degrees: BTreeMap<String, i64>,
}

impl SummandJson {
    pub fn to_model(&self) -> SummandDescriptor {
        SummandDescriptor {
            ranks: self.ranks.clone(),
            degrees: self.degrees.clone(),
        }
    }
}

/// Component weights and a decomposition into indecomposable summands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandsFile {
    pub lambda: BTreeMap<String, LambdaJson>,
    pub summands: Vec<SummandJson>,
}

pub enum LambdaWeights {
    Exact(BTreeMap<String, Rational64>),
    Float(BTreeMap<String, Complex64>),
}

impl SummandsFile {
    pub fn weights(&self) -> Result<LambdaWeights> {
        let mut exact = BTreeMap::new();
        for (k, v) in &self.lambda {
            match v.exact()? {
                Some(r) => {
                    exact.insert(k.clone(), r);
                }
                None => {
                    let float = self
                        .lambda
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), v.complex()?)))
                        .collect::<Result<_>>()?;
                    return Ok(LambdaWeights::Float(float));
                }
            }
        }
        Ok(LambdaWeights::Exact(exact))
    }

    pub fn summands(&self) -> Vec<SummandDescriptor> {
        self.summands.iter().map(SummandJson::to_model).collect()
    }
}

/// Star quiver, its connection system and optional unipotency orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarFile {
    pub quiver: QuiverFile,
    pub rep: RepFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
}
