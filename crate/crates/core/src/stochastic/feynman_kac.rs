//! Feynman-Kac representation of the finite-horizon exchange rate:
//!
//! ```text
//! e(t, f0) = (1 / alpha) E[ integral_0^t exp(-s / alpha) f(s) ds ],  f(0) = f0,
//! ```
//!
//! with `f` the regulated OU fundamental. The integral is discretised with the
//! trapezoidal rule over the path nodes.

use rayon::prelude::*;

use super::{euler_step, path_rng, standard_normal, validate_inputs, Regulation};
use crate::error::{Error, Result};
use crate::stationary::{Band, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    /// Pair every path with its negated-noise twin. `None` turns pairing on
    /// exactly when `f0` equals the long-run level.
    pub antithetic: Option<bool>,
    pub regulation: Regulation,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { n_paths: 200_000, dt: 1e-3, seed: 20_110_913, antithetic: None, regulation: Regulation::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation of the independent units over `sqrt(units)`.
    /// With antithetic pairing the unit is a pair average.
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
}

struct Discounting {
    /// Trapezoid weights `dt * w_k / alpha`, halved at both ends.
    weights: Vec<f64>,
    dt: f64,
}

impl Discounting {
    fn new(alpha: f64, t: f64, dt_max: f64) -> Self {
        let n_steps = if t == 0.0 { 0 } else { (t / dt_max - 1e-9).ceil().max(1.0) as usize };
        let dt = if n_steps == 0 { 0.0 } else { t / n_steps as f64 };
        let mut weights: Vec<f64> =
            (0..=n_steps).map(|k| dt * (-(k as f64) * dt / alpha).exp() / alpha).collect();
        if n_steps > 0 {
            weights[0] *= 0.5;
            weights[n_steps] *= 0.5;
        } else {
            weights[0] = 0.0;
        }
        Self { weights, dt }
    }
}

/// Monte-Carlo estimate of `e(t, f0)`.
///
/// Path `i` (or pair `i`) draws from stream `i` of `config.seed`, and the
/// per-path results are reduced sequentially after the parallel sweep, so the
/// estimate is bitwise identical under any thread schedule.
pub fn feynman_kac_estimate(
    params: &ModelParams,
    band: &Band,
    f0: f64,
    t: f64,
    config: &McConfig,
) -> Result<McEstimate> {
    validate_inputs(params, band, f0, config.dt)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be non-negative, got {t}")));
    }
    if config.n_paths < 100 {
        return Err(Error::param("paths", format!("need at least 100 paths, got {}", config.n_paths)));
    }
    let antithetic = config.antithetic.unwrap_or(f0 == params.mu);
    if antithetic && !config.n_paths.is_multiple_of(2) {
        return Err(Error::param("paths", "antithetic pairing needs an even path count"));
    }

    let disc = Discounting::new(params.alpha, t, config.dt);
    let scale = params.sigma * disc.dt.sqrt();
    let regulate = |x: f64| config.regulation.apply(x, band.f_lo, band.f_hi).0;

    let units = if antithetic { config.n_paths / 2 } else { config.n_paths };
    let samples: Vec<f64> = (0..units as u64)
        .into_par_iter()
        .map(|unit| {
            let mut rng = path_rng(config.seed, unit);
            let (mut f, mut g) = (f0, f0);
            let (mut acc_f, mut acc_g) = (disc.weights[0] * f0, disc.weights[0] * f0);
            for &w in &disc.weights[1..] {
                let shock = scale * standard_normal(&mut rng);
                f = regulate(euler_step(params, f, disc.dt, shock));
                acc_f += w * f;
                if antithetic {
                    g = regulate(euler_step(params, g, disc.dt, -shock));
                    acc_g += w * g;
                }
            }
            if antithetic {
                0.5 * (acc_f + acc_g)
            } else {
                acc_f
            }
        })
        .collect();

    let (mean, std_error) = mean_and_standard_error(&samples);
    Ok(McEstimate { mean, std_error, n_paths: config.n_paths, seed: config.seed })
}

/// Two-pass mean and standard error of the mean.
fn mean_and_standard_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::calibrate_symmetric;

    fn setup() -> (ModelParams, Band) {
        let params = ModelParams::default();
        (params, calibrate_symmetric(&params, 0.01).unwrap().band)
    }

    #[test]
    fn zero_horizon_is_exactly_zero() {
        let (params, band) = setup();
        let est = feynman_kac_estimate(&params, &band, 0.03, 0.0, &McConfig { n_paths: 1000, ..Default::default() })
            .unwrap();
        assert_eq!((est.mean, est.std_error), (0.0, 0.0));
    }

    #[test]
    fn antithetic_estimate_at_the_centre_is_zero() {
        let (params, band) = setup();
        let cfg = McConfig { n_paths: 2000, ..Default::default() };
        let est = feynman_kac_estimate(&params, &band, 0.0, 1.0, &cfg).unwrap();
        assert!(est.mean.abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn plain_estimate_at_the_centre_is_near_zero() {
        let (params, band) = setup();
        let cfg = McConfig { n_paths: 20_000, antithetic: Some(false), ..Default::default() };
        let est = feynman_kac_estimate(&params, &band, 0.0, 1.0, &cfg).unwrap();
        assert!(est.std_error > 0.0);
        assert!(est.mean.abs() < 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn frozen_fundamental_integrates_the_discount() {
        // sigma -> 0 with rho = 0 freezes f at f0, so the estimate is
        // f0 (1 - exp(-t / alpha)) up to trapezoid error.
        let params = ModelParams { rho: 0.0, sigma: 1e-300, ..ModelParams::default() };
        let band = Band::symmetric(0.09, 0.01);
        let est = feynman_kac_estimate(&params, &band, 0.05, 2.0, &McConfig { n_paths: 100, ..Default::default() })
            .unwrap();
        let exact = 0.05 * (1.0 - (-2.0_f64 / 3.0).exp());
        assert!((est.mean - exact).abs() < 1e-9, "{} vs {exact}", est.mean);
    }

    #[test]
    fn step_is_shrunk_to_hit_the_horizon() {
        let disc = Discounting::new(3.0, 1.0, 0.3);
        assert_eq!(disc.weights.len(), 5);
        assert!((disc.dt - 0.25).abs() < 1e-15);
    }

    #[test]
    fn input_errors() {
        let (params, band) = setup();
        let few = McConfig { n_paths: 10, ..Default::default() };
        assert!(matches!(
            feynman_kac_estimate(&params, &band, 0.0, 1.0, &few),
            Err(Error::InvalidParameter { name: "paths", .. })
        ));
        let odd = McConfig { n_paths: 101, antithetic: Some(true), ..Default::default() };
        assert!(feynman_kac_estimate(&params, &band, 0.0, 1.0, &odd).is_err());
        assert!(matches!(
            feynman_kac_estimate(&params, &band, 0.0, -1.0, &McConfig::default()),
            Err(Error::InvalidParameter { name: "t", .. })
        ));
    }

    #[test]
    fn standard_error_formula() {
        let (m, se) = mean_and_standard_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0_f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
