//! The `calibrate`, `solve` and `simulate` pipelines.

use std::path::PathBuf;

use targetzone::{
    calibrate_bm, calibrate_symmetric, eval_bm, eval_stationary, feynman_kac_estimate, solve_nonstationary,
    Band, ModelParams, Surface,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Csv, Report};

/// Number of points on every stationary curve written to CSV.
pub const CURVE_POINTS: usize = 401;

/// What a command printed and which files it wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub report: String,
    pub files: Vec<PathBuf>,
}

/// The calibrated stationary curve, OU for `rho > 0` and Brownian motion for
/// `rho = 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Stationary {
    Ou(targetzone::Calibration),
    Bm(targetzone::BmCalibration),
}

impl Stationary {
    pub(crate) fn calibrate(params: &ModelParams, e_bar: f64) -> Result<Self, CliError> {
        if params.rho == 0.0 {
            Ok(Self::Bm(calibrate_bm(params.alpha, params.sigma, e_bar)?))
        } else {
            Ok(Self::Ou(calibrate_symmetric(params, e_bar)?))
        }
    }

    pub(crate) fn band(&self) -> Band {
        match self {
            Self::Ou(c) => c.band,
            Self::Bm(c) => c.band,
        }
    }

    pub(crate) fn eval(&self, params: &ModelParams, f: f64) -> Result<f64, CliError> {
        Ok(match self {
            Self::Ou(c) => eval_stationary(params, &c.coefs, f)?,
            Self::Bm(c) => eval_bm(&c.coefs, f),
        })
    }

    fn residuals(&self) -> [f64; 2] {
        match self {
            Self::Ou(c) => c.residuals,
            Self::Bm(c) => c.residuals,
        }
    }

    fn iterations(&self) -> usize {
        match self {
            Self::Ou(c) => c.iterations,
            Self::Bm(c) => c.iterations,
        }
    }

    /// `f,e` on `n` evenly spaced nodes across the band.
    pub(crate) fn curve(&self, params: &ModelParams, n: usize) -> Result<Vec<(f64, f64)>, CliError> {
        let band = self.band();
        (0..n)
            .map(|i| {
                let f = if i + 1 == n { band.f_hi } else { band.f_lo + band.width() * i as f64 / (n - 1) as f64 };
                Ok((f, self.eval(params, f)?))
            })
            .collect()
    }
}

fn echo_params(report: &mut Report, cfg: &RunConfig) {
    let p = &cfg.params;
    report
        .num("alpha", p.alpha)
        .num("rho", p.rho)
        .num("sigma", p.sigma)
        .num("mu", p.mu)
        .num("ebar", cfg.e_bar)
        .num("horizon", p.horizon);
}

fn echo_grid(report: &mut Report, cfg: &RunConfig) {
    report
        .int("nf", cfg.grid.nf)
        .int("nt", cfg.grid.nt)
        .num("theta", cfg.grid.theta)
        .int("startup_steps", cfg.grid.startup_steps);
}

/// Long-format `t,f,e` table of a surface.
pub(crate) fn surface_csv(surface: &Surface) -> Csv {
    let mut csv = Csv::new(&["t", "f", "e"]);
    for (t, row) in surface.t_axis.iter().zip(surface.rows()) {
        for (f, e) in surface.f_axis.iter().zip(row) {
            csv.row(&[*t, *f, *e]);
        }
    }
    csv
}

pub fn run_calibrate(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let stationary = Stationary::calibrate(&cfg.params, cfg.e_bar)?;
    let mut report = Report::new("calibrate");
    echo_params(&mut report, cfg);
    match &stationary {
        Stationary::Ou(c) => report.text("model", "ou").num("c1", c.coefs.c1).num("c2", c.coefs.c2),
        Stationary::Bm(c) => report.text("model", "bm").num("a", c.coefs.a_coef).num("lambda", c.coefs.lambda),
    };
    let [level, slope] = stationary.residuals();
    report
        .num("f_bar", stationary.band().f_hi)
        .num("residual_level", level)
        .num("residual_slope", slope)
        .int("iterations", stationary.iterations());

    let mut files = Vec::new();
    if let Some(path) = &cfg.output_path {
        let mut csv = Csv::new(&["f", "e"]);
        for (f, e) in stationary.curve(&cfg.params, CURVE_POINTS)? {
            csv.row(&[f, e]);
        }
        files.push(csv.write_to(path)?);
    }
    Ok(CommandOutput { report: report.finish(), files })
}

pub fn run_solve(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let stationary = Stationary::calibrate(&cfg.params, cfg.e_bar)?;
    let band = stationary.band();
    let surface = solve_nonstationary(&cfg.params, &band, &cfg.grid)?;

    let last = surface.t_axis.len() - 1;
    let row = surface.row(last);
    let mut distance = 0.0_f64;
    for (f, e) in surface.f_axis.iter().zip(row) {
        distance = distance.max((e - stationary.eval(&cfg.params, *f)?).abs());
    }
    let (slope_lo, slope_hi) = surface.edge_slopes(last);

    let mut report = Report::new("solve");
    echo_params(&mut report, cfg);
    echo_grid(&mut report, cfg);
    report
        .num("f_bar", band.f_hi)
        .num("e_lower_at_horizon", row[0])
        .num("e_upper_at_horizon", row[row.len() - 1])
        .num("edge_slope_lower_at_horizon", slope_lo)
        .num("edge_slope_upper_at_horizon", slope_hi)
        .num("max_distance_to_stationary", distance);

    let mut files = Vec::new();
    if let Some(path) = &cfg.output_path {
        files.push(surface_csv(&surface).write_to(path)?);
    }
    Ok(CommandOutput { report: report.finish(), files })
}

pub fn run_simulate(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let stationary = Stationary::calibrate(&cfg.params, cfg.e_bar)?;
    let band = stationary.band();
    let f0 = cfg.params.mu + cfg.f0_frac * (band.f_hi - cfg.params.mu);
    let mc = cfg.mc_settings();
    let mut mc_config = mc.to_config();
    mc_config.antithetic = Some(f0 == cfg.params.mu && mc.n_paths.is_multiple_of(2));
    let estimate = feynman_kac_estimate(&cfg.params, &band, f0, cfg.time, &mc_config)?;

    let surface = solve_nonstationary(&cfg.params, &band, &cfg.grid)?;
    let k = surface.nearest_time_index(cfg.time)?;
    let pde = interpolate(&surface.f_axis, surface.row(k), f0);
    let z = if estimate.std_error > 0.0 { (estimate.mean - pde) / estimate.std_error } else { 0.0 };

    let mut report = Report::new("simulate");
    echo_params(&mut report, cfg);
    echo_grid(&mut report, cfg);
    report
        .int("paths", estimate.n_paths)
        .num("dt", mc.dt)
        .int("seed", estimate.seed)
        .text("antithetic", if mc_config.antithetic == Some(true) { "true" } else { "false" })
        .text("regulation", &format!("{:?}", mc_config.regulation).to_lowercase())
        .num("f_bar", band.f_hi)
        .num("time", cfg.time)
        .num("f0", f0)
        .num("mc_mean", estimate.mean)
        .num("mc_std_error", estimate.std_error)
        .num("pde_value", pde)
        .num("pde_time", surface.t_axis[k])
        .num("z_score", z);

    let mut files = Vec::new();
    if let Some(path) = &cfg.output_path {
        let mut csv = Csv::new(&["t", "f0", "mc_mean", "mc_std_error", "pde_value"]);
        csv.row(&[cfg.time, f0, estimate.mean, estimate.std_error, pde]);
        files.push(csv.write_to(path)?);
    }
    Ok(CommandOutput { report: report.finish(), files })
}

/// Piecewise-linear interpolation on a uniform, increasing axis.
pub(crate) fn interpolate(axis: &[f64], values: &[f64], x: f64) -> f64 {
    let n = axis.len();
    let h = (axis[n - 1] - axis[0]) / (n - 1) as f64;
    let pos = ((x - axis[0]) / h).clamp(0.0, (n - 1) as f64);
    let i = (pos.floor() as usize).min(n - 2);
    let w = pos - i as f64;
    (1.0 - w) * values[i] + w * values[i + 1]
}
