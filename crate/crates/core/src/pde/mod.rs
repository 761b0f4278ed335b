//! Finite-horizon exchange rate on the fundamental band.
//!
//! In time remaining until entry `t`, the rate solves
//!
//! ```text
//! e_t = (sigma^2 / 2) e_ff - rho (f - mu) e_f - e / alpha + f / alpha
//! e(0, f) = 0,   e_f = 0 at both band edges
//! ```
//!
//! Space is discretised with central differences on a uniform grid; the
//! Neumann edges use a mirrored ghost node, which folds into the first and last
//! rows of the tridiagonal system. Time stepping is theta-weighted
//! (`theta = 0.5` is Crank-Nicolson, `theta = 1` backward Euler). The operator
//! is time-independent, so the implicit matrix is factored once per solve.

mod convergence;
mod tridiag;

pub use convergence::{convergence_order, ConvergenceOrders};
pub use tridiag::{Tridiagonal, TridiagonalLu};

use crate::error::{Error, Result};
use crate::stationary::{Band, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of fundamental nodes, edges included.
    pub nf: usize,
    /// Number of time steps over `[0, horizon]`.
    pub nt: usize,
    /// Implicitness weight in `[0, 1]`.
    pub theta: f64,
    /// Number of leading steps replaced by two backward-Euler half-steps each
    /// (Rannacher start-up). The source `f / alpha` violates the zero-slope
    /// edges at `t = 0`, and Crank-Nicolson carries the resulting high
    /// frequencies as an undamped odd-even oscillation.
    pub startup_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nf: 401, nt: 3000, theta: 0.5, startup_steps: 2 }
    }
}

impl GridSpec {
    /// Grid with the default start-up smoothing.
    pub fn new(nf: usize, nt: usize, theta: f64) -> Self {
        Self { nf, nt, theta, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nf < 3 {
            return Err(Error::param("nf", format!("need at least 3 nodes, got {}", self.nf)));
        }
        if self.nt < 1 {
            return Err(Error::param("nt", "need at least one time step"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::param("theta", format!("must lie in [0, 1], got {}", self.theta)));
        }
        if self.startup_steps > self.nt {
            return Err(Error::param("startup_steps", format!("{} exceeds nt = {}", self.startup_steps, self.nt)));
        }
        Ok(())
    }
}

/// Uniform nodes over `[lo, hi]`, mirror-symmetric about the midpoint to the
/// last bit.
pub(crate) fn uniform_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let span = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let k = 2.0 * i as f64 - span;
            center + half * k / span
        })
        .collect()
}

/// Discrete solution `e(t, f)` on a (time remaining) x (fundamental) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub t_axis: Vec<f64>,
    pub f_axis: Vec<f64>,
    /// Row-major, one row of `f_axis.len()` values per time node.
    values: Vec<f64>,
}

impl Surface {
    pub fn nf(&self) -> usize {
        self.f_axis.len()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let nf = self.nf();
        &self.values[k * nf..(k + 1) * nf]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.nf())
    }

    pub fn value(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.nf() + i]
    }

    pub fn horizon(&self) -> f64 {
        *self.t_axis.last().expect("surface has at least one time node")
    }

    /// Index of the time node nearest to `t`.
    pub fn nearest_time_index(&self, t: f64) -> Result<usize> {
        let horizon = self.horizon();
        let slack = 1e-12 * horizon;
        if !(t >= -slack && t <= horizon + slack) {
            return Err(Error::OutOfRange { t, horizon });
        }
        let nt = self.t_axis.len() - 1;
        Ok(((t / horizon * nt as f64).round() as usize).min(nt))
    }

    /// Second-order one-sided slopes `(lower, upper)` at the band edges for
    /// time node `k`.
    pub fn edge_slopes(&self, k: usize) -> (f64, f64) {
        let row = self.row(k);
        let n = row.len();
        let df = self.f_axis[1] - self.f_axis[0];
        let lower = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * df);
        let upper = (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * df);
        (lower, upper)
    }
}

/// A fixed-time section of a [`Surface`].
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    /// Time of the node actually used.
    pub t: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub e_lower: f64,
    pub e_upper: f64,
}

/// Spatial operator `L e = (sigma^2/2) e_ff - rho (f - mu) e_f - e / alpha`
/// with ghost-node Neumann rows.
fn spatial_operator(params: &ModelParams, f_axis: &[f64]) -> Tridiagonal {
    let n = f_axis.len();
    let df = (f_axis[n - 1] - f_axis[0]) / (n - 1) as f64;
    let diffusion = 0.5 * params.sigma * params.sigma / (df * df);
    let decay = 1.0 / params.alpha;

    let mut lower = vec![0.0; n];
    let mut diag = vec![-2.0 * diffusion - decay; n];
    let mut upper = vec![0.0; n];
    for (i, &f) in f_axis.iter().enumerate() {
        let advection = params.rho * (f - params.mu) / (2.0 * df);
        lower[i] = diffusion + advection;
        upper[i] = diffusion - advection;
    }
    // Mirror ghosts e[-1] = e[1] and e[n] = e[n-2]; the advection terms cancel.
    upper[0] = 2.0 * diffusion;
    lower[0] = 0.0;
    lower[n - 1] = 2.0 * diffusion;
    upper[n - 1] = 0.0;
    diag[0] = -2.0 * diffusion - decay;
    diag[n - 1] = diag[0];
    Tridiagonal { lower, diag, upper }
}

/// `(I - theta dt L) e' = (I + (1 - theta) dt L) e + dt f / alpha`, factored.
struct ThetaStep {
    explicit: Tridiagonal,
    implicit: TridiagonalLu,
    source: Vec<f64>,
}

impl ThetaStep {
    fn new(op: &Tridiagonal, theta: f64, dt: f64, f_axis: &[f64], alpha: f64) -> Result<Self> {
        let scaled = |w: f64, shift: f64| Tridiagonal {
            lower: op.lower.iter().map(|&c| w * dt * c).collect(),
            diag: op.diag.iter().map(|&c| shift + w * dt * c).collect(),
            upper: op.upper.iter().map(|&c| w * dt * c).collect(),
        };
        Ok(Self {
            explicit: scaled(1.0 - theta, 1.0),
            implicit: scaled(-theta, 1.0).factor()?,
            source: f_axis.iter().map(|&f| dt * f / alpha).collect(),
        })
    }

    fn advance(&self, current: &[f64], next: &mut [f64]) {
        self.explicit.apply(current, next);
        for (r, s) in next.iter_mut().zip(&self.source) {
            *r += s;
        }
        self.implicit.solve_in_place(next);
    }
}

/// Theta-weighted implicit solve of the finite-horizon problem on `band`.
pub fn solve_nonstationary(params: &ModelParams, band: &Band, grid: &GridSpec) -> Result<Surface> {
    params.validate()?;
    band.validate()?;
    grid.validate()?;

    let nf = grid.nf;
    let nt = grid.nt;
    let dt = params.horizon / nt as f64;
    let f_axis = uniform_axis(band.f_lo, band.f_hi, nf);
    let t_axis: Vec<f64> = (0..=nt).map(|k| params.horizon * k as f64 / nt as f64).collect();

    let op = spatial_operator(params, &f_axis);
    let main = ThetaStep::new(&op, grid.theta, dt, &f_axis, params.alpha)?;
    let startup = if grid.startup_steps > 0 && grid.theta < 1.0 {
        Some(ThetaStep::new(&op, 1.0, 0.5 * dt, &f_axis, params.alpha)?)
    } else {
        None
    };

    let mut values = vec![0.0; (nt + 1) * nf];
    let mut rhs = vec![0.0; nf];
    let mut half = vec![0.0; nf];
    for step in 0..nt {
        let (done, rest) = values.split_at_mut((step + 1) * nf);
        let current = &done[step * nf..];
        match &startup {
            Some(be) if step < grid.startup_steps => {
                be.advance(current, &mut half);
                be.advance(&half, &mut rhs);
            }
            _ => main.advance(current, &mut rhs),
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Instability { step: step + 1 });
        }
        rest[..nf].copy_from_slice(&rhs);
    }

    Ok(Surface { t_axis, f_axis, values })
}

/// Section at the time node nearest to `t` (no interpolation).
pub fn slice_at(surface: &Surface, t: f64) -> Result<Slice> {
    let k = surface.nearest_time_index(t)?;
    let points = surface.f_axis.iter().copied().zip(surface.row(k).iter().copied()).collect();
    Ok(Slice { t: surface.t_axis[k], points })
}

/// Exchange rate at both band edges for every time node.
pub fn boundary_paths(surface: &Surface) -> Vec<BoundaryPoint> {
    let last = surface.nf() - 1;
    surface
        .t_axis
        .iter()
        .zip(surface.rows())
        .map(|(&t, row)| BoundaryPoint { t, e_lower: row[0], e_upper: row[last] })
        .collect()
}
