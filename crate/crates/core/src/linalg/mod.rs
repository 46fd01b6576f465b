// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra over a generic real field.

mod lu;
mod matrix;
mod schur;
mod svd;

pub use lu::{solve_upper_triangular, Lu};
pub use matrix::Matrix;
pub use schur::Schur;
pub use svd::Svd;
