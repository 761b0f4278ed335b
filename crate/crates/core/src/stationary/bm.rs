//! Brownian-motion fundamental (Krugman's original zone), the `rho -> 0` limit.
//!
//! With no mean reversion the stationary equation is
//! `(alpha sigma^2 / 2) e'' - e = -f`, whose odd solutions are
//! `e(f) = f + A (exp(lambda f) - exp(-lambda f))` with
//! `lambda = sqrt(2 / (alpha sigma^2))`.

use super::Band;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmStationaryCoefficients {
    pub a_coef: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmCalibration {
    pub coefs: BmStationaryCoefficients,
    pub band: Band,
    pub residuals: [f64; 2],
    pub iterations: usize,
}

impl BmCalibration {
    pub fn f_bar(&self) -> f64 {
        self.band.f_hi
    }
}

pub fn eval_bm(coefs: &BmStationaryCoefficients, f: f64) -> f64 {
    f + 2.0 * coefs.a_coef * (coefs.lambda * f).sinh()
}

pub fn eval_bm_slope(coefs: &BmStationaryCoefficients, f: f64) -> f64 {
    1.0 + 2.0 * coefs.a_coef * coefs.lambda * (coefs.lambda * f).cosh()
}

/// Smooth pasting fixes `A = -1 / (2 lambda cosh(lambda f_bar))`, leaving the
/// scalar equation `f_bar - tanh(lambda f_bar) / lambda = e_bar`. Its left side
/// is increasing and convex in `f_bar`, so Newton started to the right of the
/// root converges monotonically.
pub fn calibrate_bm(alpha: f64, sigma: f64, e_bar: f64) -> Result<BmCalibration> {
    for (name, v) in [("alpha", alpha), ("sigma", sigma), ("e_bar", e_bar)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("must be positive, got {v}")));
        }
    }
    let lambda = (2.0 / (alpha * sigma * sigma)).sqrt();
    let mut f = e_bar + 1.0 / lambda;
    if lambda * f > 700.0 {
        return Err(Error::NoSolution(format!("lambda * f_bar = {} overflows", lambda * f)));
    }

    let value = |f: f64| f - (lambda * f).tanh() / lambda - e_bar;
    let mut iterations = 0;
    while iterations < 100 {
        let h = value(f);
        let t = (lambda * f).tanh();
        let step = h / (t * t);
        if !step.is_finite() {
            return Err(Error::Calibration { iterations, residuals: [h, f64::NAN] });
        }
        f -= step;
        iterations += 1;
        if step.abs() <= 1e-16 * f.abs() {
            break;
        }
    }

    let coefs = BmStationaryCoefficients { a_coef: -1.0 / (2.0 * lambda * (lambda * f).cosh()), lambda };
    let residuals = [eval_bm(&coefs, f) - e_bar, eval_bm_slope(&coefs, f)];
    if residuals.iter().any(|r| r.is_nan() || r.abs() >= 1e-10) {
        return Err(Error::Calibration { iterations, residuals });
    }
    Ok(BmCalibration { coefs, band: Band::symmetric(f, e_bar), residuals, iterations })
}
