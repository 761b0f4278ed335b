//! Run configuration: built-in defaults, then a `key = value` file, then
//! command-line flags, later sources winning.

use std::path::PathBuf;

use targetzone::{GridSpec, McConfig, ModelParams};

use crate::error::CliError;

/// Every accepted key, in the order reports echo them.
pub const KEYS: &[&str] = &[
    "alpha", "rho", "sigma", "mu", "ebar", "horizon", "nf", "nt", "theta", "paths", "dt", "seed", "f0frac",
    "time", "rhos", "out",
];

/// Monte-Carlo settings as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        let d = McConfig::default();
        Self { n_paths: d.n_paths, dt: d.dt, seed: d.seed }
    }
}

impl McSettings {
    pub fn to_config(self) -> McConfig {
        McConfig { n_paths: self.n_paths, dt: self.dt, seed: self.seed, ..McConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub e_bar: f64,
    pub grid: GridSpec,
    /// Set when any of `paths`, `dt`, `seed` was given; commands that need
    /// Monte-Carlo fall back to [`McSettings::default`].
    pub mc: Option<McSettings>,
    pub output_path: Option<PathBuf>,
    /// Starting point of `simulate`, as a fraction of `f_bar`.
    pub f0_frac: f64,
    /// Time remaining at which `simulate` evaluates the exchange rate.
    pub time: f64,
    /// Mean-reversion speeds plotted by figure 4.
    pub rhos: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            e_bar: 0.01,
            grid: GridSpec::default(),
            mc: None,
            output_path: None,
            f0_frac: 0.5,
            time: 1.0,
            rhos: vec![1.0, 0.5, 0.1, 0.001],
        }
    }
}

impl RunConfig {
    pub fn mc_settings(&self) -> McSettings {
        self.mc.unwrap_or_default()
    }
}

/// Split config-file text into `(key, value)` pairs. `#` starts a comment.
pub fn parse_pairs(file_text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in file_text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            key: line.to_string(),
            reason: format!("line {}: expected `key = value`", lineno + 1),
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config { key: key.to_string(), reason: format!("cannot parse `{value}`") })
}

fn invalid(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Config { key: key.to_string(), reason: reason.into() }
}

/// Merge defaults, the config file and flag overrides into a validated
/// [`RunConfig`]. Unknown keys are errors.
pub fn parse_config(file_text: &str, flag_overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let mut mc: Option<McSettings> = None;
    let file_pairs = parse_pairs(file_text)?;

    for (key, value) in file_pairs.iter().chain(flag_overrides) {
        let (key, value) = (key.as_str(), value.as_str());
        match key {
            "alpha" => cfg.params.alpha = number(key, value)?,
            "rho" => cfg.params.rho = number(key, value)?,
            "sigma" => cfg.params.sigma = number(key, value)?,
            "mu" => cfg.params.mu = number(key, value)?,
            "ebar" => cfg.e_bar = number(key, value)?,
            "horizon" => cfg.params.horizon = number(key, value)?,
            "nf" => cfg.grid.nf = number(key, value)?,
            "nt" => cfg.grid.nt = number(key, value)?,
            "theta" => cfg.grid.theta = number(key, value)?,
            "paths" => mc.get_or_insert_with(McSettings::default).n_paths = number(key, value)?,
            "dt" => mc.get_or_insert_with(McSettings::default).dt = number(key, value)?,
            "seed" => mc.get_or_insert_with(McSettings::default).seed = number(key, value)?,
            "f0frac" => cfg.f0_frac = number(key, value)?,
            "time" => cfg.time = number(key, value)?,
            "rhos" => {
                cfg.rhos = value.split(',').map(|v| number(key, v.trim())).collect::<Result<_, _>>()?;
            }
            "out" => cfg.output_path = Some(PathBuf::from(value)),
            _ => return Err(invalid(key, "unknown key")),
        }
    }
    cfg.mc = mc;
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    let positive = [("alpha", p.alpha), ("sigma", p.sigma), ("ebar", cfg.e_bar), ("horizon", p.horizon)];
    for (key, v) in positive {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(key, format!("must be positive, got {v}")));
        }
    }
    if !(p.rho >= 0.0 && p.rho.is_finite()) {
        return Err(invalid("rho", format!("must be non-negative, got {}", p.rho)));
    }
    if !p.mu.is_finite() {
        return Err(invalid("mu", "must be finite"));
    }
    if cfg.grid.nf < 3 {
        return Err(invalid("nf", format!("need at least 3 nodes, got {}", cfg.grid.nf)));
    }
    if cfg.grid.nt < 1 {
        return Err(invalid("nt", "need at least one time step"));
    }
    if !(0.0..=1.0).contains(&cfg.grid.theta) {
        return Err(invalid("theta", format!("must lie in [0, 1], got {}", cfg.grid.theta)));
    }
    if let Some(mc) = cfg.mc {
        if mc.n_paths < 100 {
            return Err(invalid("paths", format!("need at least 100 paths, got {}", mc.n_paths)));
        }
        if !(mc.dt > 0.0 && mc.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", mc.dt)));
        }
    }
    if !(-1.0..=1.0).contains(&cfg.f0_frac) {
        return Err(invalid("f0frac", format!("must lie in [-1, 1], got {}", cfg.f0_frac)));
    }
    if !(cfg.time >= 0.0 && cfg.time <= p.horizon) {
        return Err(invalid("time", format!("must lie in [0, horizon], got {}", cfg.time)));
    }
    if cfg.rhos.is_empty() || cfg.rhos.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(invalid("rhos", "need a non-empty list of positive values"));
    }
    Ok(())
}
