// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("eigenvalue set is resonant: {a} and {b} differ by a nonzero integer")]
    ResonantSet { a: Complex64, b: Complex64 },

    #[error("eigenvalue set does not contain 0")]
    MissingZero,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("eigenvalue {eigenvalue} lies outside S")]
    SpectrumOutsideS { eigenvalue: Complex64 },

    #[error("eigenvalue {eigenvalue} lies outside T")]
    SpectrumOutsideT { eigenvalue: Complex64 },

    #[error("eigenvalue {eigenvalue} matches more than one branch of T")]
    BranchAmbiguity { eigenvalue: Complex64 },

    #[error("eigenvalue solver failed: {0}")]
    EigenSolverFailure(String),

    #[error("component {component} has genus {genus}; only genus 0 is supported here")]
    GenusNotZero { component: String, genus: u32 },

    #[error("point monodromy at {point} is numerically singular")]
    SingularMonodromy { point: String },

    #[error("operation requires non-interfering arrows")]
    RequiresNonInterfering,

    #[error("factor {factor} is numerically singular")]
    SingularFactor { factor: String },

    #[error("relation defect at {location}: {defect:.3e} exceeds tolerance")]
    RelationDefect { location: String, defect: f64 },

    #[error("evaluation point coincides with pole at {pole}")]
    AtPole { pole: Complex64 },

    #[error("integrator step size underflow at parameter {at}")]
    StepSizeUnderflow { at: f64 },

    #[error("integrator exceeded {max_steps} steps")]
    TooManySteps { max_steps: usize },

    #[error("loop passes within {distance:.3e} of pole {pole} (clearance {clearance:.3e})")]
    ClearanceViolated { pole: Complex64, distance: f64, clearance: f64 },

    #[error("loop encloses {count} poles; exactly one is required")]
    MultiplePolesEnclosed { count: usize },

    #[error("residue at {point} is not nilpotent of order <= {order}")]
    NonNilpotentResidue { point: String, order: usize },

    #[error("residues do not sum to zero (defect {defect:.3e})")]
    ResidueSumNonZero { defect: f64 },

    #[error("representation is not nilpotent at arrow {arrow}")]
    NotNilpotent { arrow: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{location}: {source}")]
    At {
        location: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with the name of the arrow, point or component it concerns.
    pub fn at(self, location: impl Into<String>) -> Self {
        Error::At {
            location: location.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, with location wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            e => e,
        }
    }
}
