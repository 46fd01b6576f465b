// SPDX-License-Identifier: Apache-2.0

//! Monodromy correspondence between connection data on Riemann surface quivers
//! and representations of multiplicative preprojective algebras.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the command-line tool uses.

pub mod additive;
pub mod dynkin;
pub mod error;
pub mod fuchsian;
pub mod io;
pub mod linalg;
pub mod matfun;
pub mod multiplicative;
pub mod ode;
pub mod quiver;
pub mod random;
pub mod report;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::{LiftScalar, Real};

/// Complex matrix over `f64`.
pub type CMatrix = linalg::Matrix<f64>;
pub type Quiver = quiver::RiemannSurfaceQuiver<f64>;
pub type Weights = quiver::WeightData<f64>;
pub type TSet = quiver::EigenvalueSet<f64>;
pub type ConnectionSystem = additive::ConnectionSystemRep<f64>;
pub type MonodromyData = multiplicative::MonodromyRep<f64>;
pub type CyclicRepresentation = transform::CyclicRep<f64>;
pub type Fuchsian = fuchsian::FuchsianSystem<f64>;
pub type FuchsianLoop = fuchsian::Loop<f64>;
pub type DoubleRep = dynkin::DoubleQuiverRep<f64>;
