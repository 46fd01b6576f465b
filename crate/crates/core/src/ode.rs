// SPDX-License-Identifier: Apache-2.0

//! Adaptive Dormand–Prince 5(4) integration of matrix-valued ODEs `Y′ = F(s, Y)`
//! over a real parameter interval.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// First trial step as a fraction of the interval length.
    pub initial_step: T,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-10),
            atol: T::lit(1e-12),
            max_steps: 200_000,
            initial_step: T::lit(1e-2),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (first-same-as-last with the last stage).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrates from `s0` to `s1` starting at `y0`.
pub fn integrate<T, F>(mut f: F, s0: T, s1: T, y0: Matrix<T>, cfg: &IntegratorConfig<T>) -> Result<(Matrix<T>, IntegrationStats)>
where
    T: Real,
    F: FnMut(T, &Matrix<T>) -> Result<Matrix<T>>,
{
    let span = s1 - s0;
    let mut stats = IntegrationStats::default();
    if span.is_zero() {
        return Ok((y0, stats));
    }
    let dir = span.signum();
    let mut s = s0;
    let mut y = y0;
    let mut h = span.abs() * cfg.initial_step;
    let mut k1 = f(s, &y)?;
    let min_h = T::epsilon() * T::lit(16.0) * (s0.abs().max(s1.abs()).max(T::one()));
    loop {
        let remaining = (s1 - s) * dir;
        if remaining <= T::zero() {
            break;
        }
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::TooManySteps { max_steps: cfg.max_steps });
        }
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        if step < min_h && !last {
            return Err(Error::StepSizeUnderflow { at: s.to_f64_lossy() });
        }
        let hs = step * dir;
        let mut k: Vec<Matrix<T>> = Vec::with_capacity(7);
        k.push(k1.clone());
        for i in 1..7 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate().take(i) {
                if A[i][j] != 0.0 {
                    yi += &kj.scale_real(hs * T::lit(A[i][j]));
                }
            }
            k.push(f(s + hs * T::lit(C[i]), &yi)?);
        }
        let mut y_new = y.clone();
        let mut err = Matrix::zeros(y.rows(), y.cols());
        for (i, ki) in k.iter().enumerate() {
            if B5[i] != 0.0 {
                y_new += &ki.scale_real(hs * T::lit(B5[i]));
            }
            let d = B5[i] - B4[i];
            if d != 0.0 {
                err += &ki.scale_real(hs * T::lit(d));
            }
        }
        let n = T::from_usize_lossy(err.as_slice().len().max(1));
        let mut acc = T::zero();
        for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
            let sc = cfg.atol + cfg.rtol * a.norm().max(b.norm());
            acc += (e.norm() / sc).powi(2);
        }
        let err_norm = (acc / n).sqrt();
        if !err_norm.is_finite() {
            return Err(Error::StepSizeUnderflow { at: s.to_f64_lossy() });
        }
        let factor = if err_norm.is_zero() {
            T::lit(MAX_FACTOR)
        } else {
            (T::lit(SAFETY) * err_norm.powf(T::lit(-0.2))).max(T::lit(MIN_FACTOR)).min(T::lit(MAX_FACTOR))
        };
        if err_norm <= T::one() {
            stats.accepted += 1;
            s = if last { s1 } else { s + hs };
            y = y_new;
            k1 = k.pop().expect("seven stages");
            h = step * factor;
        } else {
            stats.rejected += 1;
            h = step * factor.min(T::one());
            if h < min_h {
                return Err(Error::StepSizeUnderflow { at: s.to_f64_lossy() });
            }
        }
    }
    Ok((y, stats))
}
