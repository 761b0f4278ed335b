//! CSV data behind figures 1-4. Times are time remaining until entry, so a
//! calendar time `tau` corresponds to `t = horizon - tau`.

use std::path::{Path, PathBuf};

use targetzone::{boundary_paths, slice_at, solve_nonstationary, ModelParams, Surface};

use crate::commands::{surface_csv, Stationary, CURVE_POINTS};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_num, Csv};

/// Section times of figure 2; those beyond the horizon are skipped.
pub const SLICE_TIMES: [f64; 5] = [0.0, 0.15, 0.6, 1.95, 3.0];

fn solve(cfg: &RunConfig) -> Result<Surface, CliError> {
    let stationary = Stationary::calibrate(&cfg.params, cfg.e_bar)?;
    Ok(solve_nonstationary(&cfg.params, &stationary.band(), &cfg.grid)?)
}

/// Write the data for figure `which` and return the files written. Without an
/// output path the file is `fig<which>.csv` in the working directory.
pub fn run_figure(which: u8, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    if !(1..=4).contains(&which) {
        return Err(CliError::Usage(format!("--which must be 1, 2, 3 or 4, got {which}")));
    }
    let default = PathBuf::from(format!("fig{which}.csv"));
    let path = cfg.output_path.as_deref().unwrap_or(&default);
    match which {
        1 => Ok(vec![surface_csv(&solve(cfg)?).write_to(path)?]),
        2 => Ok(vec![sections(&solve(cfg)?)?.write_to(path)?]),
        3 => Ok(vec![boundaries(&solve(cfg)?).write_to(path)?]),
        _ => persistence_curves(cfg, path),
    }
}

fn sections(surface: &Surface) -> Result<Csv, CliError> {
    let horizon = surface.horizon();
    let mut csv = Csv::new(&["t", "f", "e"]);
    for t in SLICE_TIMES.into_iter().filter(|t| *t <= horizon) {
        let slice = slice_at(surface, t)?;
        for (f, e) in slice.points {
            csv.row(&[slice.t, f, e]);
        }
    }
    Ok(csv)
}

fn boundaries(surface: &Surface) -> Csv {
    let mut csv = Csv::new(&["t", "e_lower", "e_upper"]);
    for p in boundary_paths(surface) {
        csv.row(&[p.t, p.e_lower, p.e_upper]);
    }
    csv
}

/// `<stem>_<tag>.<ext>` next to `path`.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "fig4".into());
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

fn persistence_curves(cfg: &RunConfig, path: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut models = vec![("bm".to_string(), ModelParams { rho: 0.0, ..cfg.params })];
    for &rho in &cfg.rhos {
        models.push((format!("ou_rho={}", fmt_num(rho)), ModelParams { rho, ..cfg.params }));
    }
    models
        .into_iter()
        .map(|(tag, params)| {
            let stationary = Stationary::calibrate(&params, cfg.e_bar)?;
            let mut csv = Csv::with_comments(&[format!("f_bar={}", fmt_num(stationary.band().f_hi))], &["f", "e"]);
            for (f, e) in stationary.curve(&params, CURVE_POINTS)? {
                csv.row(&[f, e]);
            }
            csv.write_to(&tagged(path, &tag))
        })
        .collect()
}
