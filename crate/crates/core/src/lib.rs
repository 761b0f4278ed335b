//! Exchange-rate target zone with a fixed date of entry into a currency union.
//!
//! The fundamental follows a mean-reverting (Ornstein-Uhlenbeck) diffusion that
//! the central bank keeps inside a band `[f_lo, f_hi]` by marginal
//! interventions. The exchange rate `e(t, f)`, with `t` the time remaining until
//! entry, solves
//!
//! ```text
//! e_t + rho (f - mu) e_f - (sigma^2 / 2) e_ff + e / alpha = f / alpha
//! e(0, f) = 0,    e_f(t, f_lo) = e_f(t, f_hi) = 0
//! ```
//!
//! The crate is organised in four layers:
//!
//! - [`special`]: Kummer's confluent hypergeometric function `M(a, b, z)`.
//! - [`stationary`]: the closed-form long-horizon solution, band calibration
//!   and the Brownian-motion (Krugman) reference curve.
//! - [`pde`]: theta-weighted finite differences for the finite-horizon problem.
//! - [`stochastic`]: regulated OU paths and a Feynman-Kac Monte-Carlo estimate
//!   used to cross-check the PDE.

pub mod error;
pub mod pde;
pub mod special;
pub mod stationary;
pub mod stochastic;

pub use error::{Error, Result};
pub use pde::{
    boundary_paths, convergence_order, slice_at, solve_nonstationary, BoundaryPoint,
    ConvergenceOrders, GridSpec, Slice, Surface,
};
pub use special::{kummer_m, kummer_m_dz, KummerArgs};
pub use stationary::{
    calibrate_bm, calibrate_symmetric, eval_bm, eval_bm_slope, eval_stationary,
    eval_stationary_slope, ou_bm_distance, stationary_ode_residual, Band, BmCalibration, BmStationaryCoefficients,
    Calibration, ModelParams, StationaryCoefficients,
};
pub use stochastic::{
    feynman_kac_estimate, simulate_regulated_ou, McConfig, McEstimate, Noise, PathSpec,
    RegulatedPath, Regulation,
};
