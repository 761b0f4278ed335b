//! Regulated Ornstein-Uhlenbeck fundamental and Monte-Carlo validation.
//!
//! Between interventions the fundamental follows
//! `df = -rho (f - mu) dt + sigma dW`; the central bank's marginal
//! interventions (regulators `L` at the lower edge, `U` at the upper edge) keep
//! it inside the band. Paths use Euler-Maruyama steps followed by a boundary
//! correction whose size is booked into the regulator of that edge.

mod feynman_kac;
mod rng;

pub use feynman_kac::{feynman_kac_estimate, McConfig, McEstimate};
pub use rng::{path_rng, standard_normal};

use log::warn;
use crate::error::{Error, Result};
use crate::stationary::{Band, ModelParams};

/// How an Euler step that leaves the band is brought back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regulation {
    /// Clip onto the violated edge. Weak error `O(sqrt(dt))` near the band.
    Projection,
    /// Mirror the overshoot back into the band. For a driftless step at a
    /// single edge this is exact in law, so the weak error stays `O(dt)`.
    #[default]
    Reflection,
}

impl Regulation {
    /// Returns the regulated value and the `(dL, dU)` pushes.
    #[inline]
    pub fn apply(self, x: f64, lo: f64, hi: f64) -> (f64, f64, f64) {
        if x < lo {
            let y = match self {
                Regulation::Projection => lo,
                Regulation::Reflection => (2.0 * lo - x).min(hi),
            };
            (y, y - x, 0.0)
        } else if x > hi {
            let y = match self {
                Regulation::Projection => hi,
                Regulation::Reflection => (2.0 * hi - x).max(lo),
            };
            (y, 0.0, x - y)
        } else {
            (x, 0.0, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Noise {
    #[default]
    Gaussian,
    /// Drop the diffusion term; the path follows the regulated drift only.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub f0: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub noise: Noise,
    pub regulation: Regulation,
}

impl PathSpec {
    pub fn new(f0: f64, dt: f64, n_steps: usize, seed: u64) -> Self {
        Self { f0, dt, n_steps, seed, noise: Noise::Gaussian, regulation: Regulation::default() }
    }
}

/// Regulator increments of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegulatorStep {
    pub dl: f64,
    pub du: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegulatedPath {
    /// `n_steps + 1` values, starting with `f0`.
    pub values: Vec<f64>,
    pub cum_l: f64,
    pub cum_u: f64,
    /// Per-step pushes, `n_steps` entries.
    pub steps: Vec<RegulatorStep>,
}

pub(crate) fn validate_inputs(params: &ModelParams, band: &Band, f0: f64, dt: f64) -> Result<()> {
    params.validate()?;
    band.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    if !band.contains(f0) {
        return Err(Error::param("f0", format!("{f0} outside [{}, {}]", band.f_lo, band.f_hi)));
    }
    if params.rho * dt > 0.1 {
        warn!("rho * dt = {} is coarse for Euler-Maruyama", params.rho * dt);
    }
    Ok(())
}

/// One Euler-Maruyama step of the unregulated OU drift and noise.
#[inline]
pub(crate) fn euler_step(params: &ModelParams, f: f64, dt: f64, shock: f64) -> f64 {
    f - params.rho * (f - params.mu) * dt + shock
}

/// Simulate one regulated OU path. The noise comes from stream 0 of `seed`.
pub fn simulate_regulated_ou(params: &ModelParams, band: &Band, spec: &PathSpec) -> Result<RegulatedPath> {
    validate_inputs(params, band, spec.f0, spec.dt)?;
    if spec.n_steps < 1 {
        return Err(Error::param("n_steps", "need at least one step"));
    }

    let mut rng = path_rng(spec.seed, 0);
    let scale = params.sigma * spec.dt.sqrt();
    let mut values = Vec::with_capacity(spec.n_steps + 1);
    let mut steps = Vec::with_capacity(spec.n_steps);
    let (mut cum_l, mut cum_u) = (0.0, 0.0);
    let mut f = spec.f0;
    values.push(f);
    for _ in 0..spec.n_steps {
        let shock = match spec.noise {
            Noise::Gaussian => scale * standard_normal(&mut rng),
            Noise::Off => 0.0,
        };
        let (next, dl, du) = spec.regulation.apply(euler_step(params, f, spec.dt, shock), band.f_lo, band.f_hi);
        cum_l += dl;
        cum_u += du;
        f = next;
        values.push(f);
        steps.push(RegulatorStep { dl, du });
    }
    Ok(RegulatedPath { values, cum_l, cum_u, steps })
}
