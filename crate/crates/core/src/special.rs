//! Kummer's confluent hypergeometric function.
//!
//! `M(a, b, z) = sum_n (a)_n z^n / ((b)_n n!)`, evaluated by its Taylor series.
//! The target-zone model only needs moderate non-negative arguments
//! (`z = rho (mu - f)^2 / sigma^2`, of order one for realistic bands), where the
//! direct series is accurate. There is no asymptotic large-`z` branch; for very
//! large `|z|` the series runs into [`MAX_TERMS`] and reports non-convergence.

use crate::error::{Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 500;

/// Default relative truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl KummerArgs {
    pub fn new(a: f64, b: f64, z: f64) -> Self {
        Self { a, b, z }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.z.is_finite()) {
            return Err(Error::param("kummer", format!("non-finite argument {self:?}")));
        }
        if is_pole(self.b) {
            return Err(Error::param("b", format!("{} is a pole of the series", self.b)));
        }
        Ok(())
    }
}

fn is_pole(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

/// `M(a, b, z)`. `tol` bounds the relative truncation error; the series is
/// summed until the terms fall below `min(tol, f64::EPSILON)` relative to the
/// partial sum, so results are accurate to a few ulps of the largest term.
pub fn kummer_m(args: KummerArgs, tol: f64) -> Result<f64> {
    kummer_m_capped(args, tol, MAX_TERMS)
}

/// As [`kummer_m`] with an explicit term cap.
pub fn kummer_m_capped(args: KummerArgs, tol: f64, max_terms: usize) -> Result<f64> {
    args.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    let KummerArgs { a, b, z } = args;
    if z == 0.0 {
        return Ok(1.0);
    }

    let stop = tol.min(f64::EPSILON);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((b + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        if term == 0.0 {
            // `a` is a non-positive integer: the series is a polynomial.
            return Ok(sum);
        }
        // Only stop once the terms are shrinking for good; early terms can be
        // small by accident when `a + n` is close to zero.
        let next_ratio = ((a + nf + 1.0) * z / ((b + nf + 1.0) * (nf + 2.0))).abs();
        if next_ratio < 1.0 && term.abs() <= stop * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNotConverged { terms: max_terms })
}

/// `dM/dz (a, b, z) = (a / b) M(a + 1, b + 1, z)`.
pub fn kummer_m_dz(args: KummerArgs, tol: f64) -> Result<f64> {
    kummer_m_dzn(args, 1, tol)
}

/// `n`-th z-derivative, `(a)_n / (b)_n * M(a + n, b + n, z)`.
pub fn kummer_m_dzn(args: KummerArgs, order: u32, tol: f64) -> Result<f64> {
    args.validate()?;
    let mut factor = 1.0;
    for k in 0..order {
        let k = f64::from(k);
        factor *= (args.a + k) / (args.b + k);
    }
    if factor == 0.0 {
        return Ok(0.0);
    }
    let shifted = KummerArgs::new(args.a + f64::from(order), args.b + f64::from(order), args.z);
    Ok(factor * kummer_m(shifted, tol)?)
}
