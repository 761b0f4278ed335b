//! Long-horizon (stationary) exchange rate.
//!
//! Far from the entry date the exchange rate no longer depends on time and
//! solves the linear ODE
//!
//! ```text
//! (alpha sigma^2 / 2) e'' - alpha rho (f - mu) e' - e = -f
//! ```
//!
//! whose general solution is
//!
//! ```text
//! e(f) = C1 M(a1, 1/2, z) + C2 s (mu - f) M(a2, 3/2, z) + (alpha rho mu + f) / (1 + alpha rho)
//! s = sqrt(rho) / sigma,  z = s^2 (mu - f)^2,
//! a1 = 1 / (2 alpha rho),  a2 = (1 + alpha rho) / (2 alpha rho).
//! ```
//!
//! Derivatives in `f` go through the chain rule `dz/df = 2 s^2 (f - mu)` and the
//! identity `dM/dz (a, b, z) = (a / b) M(a + 1, b + 1, z)`.

mod bm;
mod calibrate;

pub use bm::{calibrate_bm, eval_bm, eval_bm_slope, BmCalibration, BmStationaryCoefficients};
pub use calibrate::{calibrate_symmetric, Calibration};

use crate::error::{Error, Result};
use crate::special::{kummer_m_dzn, KummerArgs, DEFAULT_TOL};

/// Economic constants of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Semi-elasticity of money demand (years).
    pub alpha: f64,
    /// Mean-reversion speed of the fundamental (1/years). Zero is Brownian motion.
    pub rho: f64,
    /// Volatility of the fundamental (per sqrt(year)).
    pub sigma: f64,
    /// Long-run level of the fundamental.
    pub mu: f64,
    /// Time until entry into the currency union (years).
    pub horizon: f64,
}

impl Default for ModelParams {
    /// The reference parameter set: a +/-1% zone with `alpha = 3`, `rho = 1`,
    /// `sigma = 0.1`, `mu = 0` and three years to entry.
    fn default() -> Self {
        Self { alpha: 3.0, rho: 1.0, sigma: 0.1, mu: 0.0, horizon: 3.0 }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        check(self.alpha > 0.0 && self.alpha.is_finite(), "alpha", "must be positive", self.alpha)?;
        check(self.rho >= 0.0 && self.rho.is_finite(), "rho", "must be non-negative", self.rho)?;
        check(self.sigma > 0.0 && self.sigma.is_finite(), "sigma", "must be positive", self.sigma)?;
        check(self.mu.is_finite(), "mu", "must be finite", self.mu)?;
        check(self.horizon > 0.0 && self.horizon.is_finite(), "horizon", "must be positive", self.horizon)?;
        Ok(())
    }

    /// Slope of the free-float line `(alpha rho mu + f) / (1 + alpha rho)`.
    pub fn free_float_slope(&self) -> f64 {
        1.0 / (1.0 + self.alpha * self.rho)
    }

    pub fn free_float(&self, f: f64) -> f64 {
        (self.alpha * self.rho * self.mu + f) * self.free_float_slope()
    }
}

fn check(ok: bool, name: &'static str, what: &str, value: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(name, format!("{what}, got {value}")))
    }
}

/// Fundamental bounds and the matching exchange-rate bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub f_lo: f64,
    pub f_hi: f64,
    pub e_lo: f64,
    pub e_hi: f64,
}

impl Band {
    pub fn symmetric(f_bar: f64, e_bar: f64) -> Self {
        Self { f_lo: -f_bar, f_hi: f_bar, e_lo: -e_bar, e_hi: e_bar }
    }

    pub fn validate(&self) -> Result<()> {
        if self.f_lo >= self.f_hi || !self.f_lo.is_finite() || !self.f_hi.is_finite() {
            return Err(Error::param("band", format!("need f_lo < f_hi, got [{}, {}]", self.f_lo, self.f_hi)));
        }
        if self.e_lo.is_nan() || self.e_hi.is_nan() || self.e_lo >= self.e_hi {
            return Err(Error::param("band", format!("need e_lo < e_hi, got [{}, {}]", self.e_lo, self.e_hi)));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.f_hi - self.f_lo
    }

    pub fn contains(&self, f: f64) -> bool {
        self.f_lo <= f && f <= self.f_hi
    }
}

/// Integration constants of the closed-form stationary solution.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StationaryCoefficients {
    pub c1: f64,
    pub c2: f64,
}

/// Value and first two `f`-derivatives of a function at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    fn scaled(self, c: f64) -> Jet {
        Jet { value: c * self.value, d1: c * self.d1, d2: c * self.d2 }
    }

    fn add(self, other: Jet) -> Jet {
        Jet { value: self.value + other.value, d1: self.d1 + other.d1, d2: self.d2 + other.d2 }
    }
}

/// Kummer parameters and scaling of the homogeneous solutions.
struct Basis {
    s: f64,
    a_even: f64,
    a_odd: f64,
}

impl Basis {
    fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        if params.rho == 0.0 {
            return Err(Error::param(
                "rho",
                "rho = 0 is the Brownian-motion fundamental; use calibrate_bm / eval_bm",
            ));
        }
        let ar = params.alpha * params.rho;
        Ok(Self { s: params.rho.sqrt() / params.sigma, a_even: 1.0 / (2.0 * ar), a_odd: (1.0 + ar) / (2.0 * ar) })
    }

    /// `M(a, b, z)` and its first two z-derivatives.
    fn kummer3(a: f64, b: f64, z: f64) -> Result<[f64; 3]> {
        let args = KummerArgs::new(a, b, z);
        Ok([
            kummer_m_dzn(args, 0, DEFAULT_TOL)?,
            kummer_m_dzn(args, 1, DEFAULT_TOL)?,
            kummer_m_dzn(args, 2, DEFAULT_TOL)?,
        ])
    }

    /// `M(a1, 1/2, z(f))`.
    fn even(&self, u: f64) -> Result<Jet> {
        let s2 = self.s * self.s;
        let [m, m1, m2] = Self::kummer3(self.a_even, 0.5, s2 * u * u)?;
        Ok(Jet { value: m, d1: 2.0 * s2 * u * m1, d2: 4.0 * s2 * s2 * u * u * m2 + 2.0 * s2 * m1 })
    }

    /// `s (mu - f) M(a2, 3/2, z(f))`.
    fn odd(&self, u: f64) -> Result<Jet> {
        let s = self.s;
        let s3 = s * s * s;
        let [n, n1, n2] = Self::kummer3(self.a_odd, 1.5, s * s * u * u)?;
        Ok(Jet {
            value: -s * u * n,
            d1: -s * n - 2.0 * s3 * u * u * n1,
            d2: -6.0 * s3 * u * n1 - 4.0 * s3 * s * s * u * u * u * n2,
        })
    }
}

pub(crate) fn stationary_jet(params: &ModelParams, coefs: &StationaryCoefficients, f: f64) -> Result<Jet> {
    let basis = Basis::new(params)?;
    let u = f - params.mu;
    let mut jet = Jet { value: params.free_float(f), d1: params.free_float_slope(), d2: 0.0 };
    if coefs.c1 != 0.0 {
        jet = jet.add(basis.even(u)?.scaled(coefs.c1));
    }
    if coefs.c2 != 0.0 {
        jet = jet.add(basis.odd(u)?.scaled(coefs.c2));
    }
    Ok(jet)
}

/// The odd homogeneous solution `s (mu - f) M(a2, 3/2, z)` with its derivatives.
pub(crate) fn odd_basis_jet(params: &ModelParams, f: f64) -> Result<Jet> {
    Basis::new(params)?.odd(f - params.mu)
}

/// Stationary exchange rate `e(f)`.
pub fn eval_stationary(params: &ModelParams, coefs: &StationaryCoefficients, f: f64) -> Result<f64> {
    Ok(stationary_jet(params, coefs, f)?.value)
}

/// Analytic `de/df` of [`eval_stationary`].
pub fn eval_stationary_slope(params: &ModelParams, coefs: &StationaryCoefficients, f: f64) -> Result<f64> {
    Ok(stationary_jet(params, coefs, f)?.d1)
}

/// Residual `(alpha sigma^2 / 2) e'' - alpha rho (f - mu) e' - e + f` at each
/// grid point, with `e''` evaluated analytically.
pub fn stationary_ode_residual(
    params: &ModelParams,
    coefs: &StationaryCoefficients,
    f_grid: &[f64],
) -> Result<Vec<f64>> {
    let diffusion = 0.5 * params.alpha * params.sigma * params.sigma;
    let drift = params.alpha * params.rho;
    f_grid
        .iter()
        .map(|&f| {
            let jet = stationary_jet(params, coefs, f)?;
            Ok(diffusion * jet.d2 - drift * (f - params.mu) * jet.d1 - jet.value + f)
        })
        .collect()
}

/// Sup-norm distance between the calibrated OU and Brownian-motion stationary
/// curves, compared on `n_points` nodes spanning the narrower of the two bands.
pub fn ou_bm_distance(params: &ModelParams, e_bar: f64, n_points: usize) -> Result<f64> {
    let ou = calibrate_symmetric(params, e_bar)?;
    let bm = calibrate_bm(params.alpha, params.sigma, e_bar)?;
    let half = ou.band.f_hi.min(bm.band.f_hi);
    let n = n_points.max(2);
    let mut worst = 0.0_f64;
    for i in 0..n {
        let f = -half + 2.0 * half * i as f64 / (n - 1) as f64;
        let d = (eval_stationary(params, &ou.coefs, f)? - eval_bm(&bm.coefs, f)).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}
