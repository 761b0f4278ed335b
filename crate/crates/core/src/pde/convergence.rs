use super::{solve_nonstationary, GridSpec, Surface};
use crate::error::{Error, Result};
use crate::stationary::{Band, ModelParams};

/// Probe positions as fractions of the band, measured from `f_lo`. The band
/// midpoint is skipped: for a symmetric problem the solution vanishes there.
const PROBE_POSITIONS: [f64; 3] = [0.75, 0.875, 1.0];
/// Probe times as fractions of the horizon.
const PROBE_TIMES: [f64; 2] = [0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOrders {
    pub order_f: f64,
    pub order_t: f64,
}

/// Observed self-convergence orders from three nested refinements in each
/// direction: `(nf, 2nf - 1, 4nf - 3)` at fixed `nt`, and `(nt, 2nt, 4nt)` at
/// fixed `nf`. Each order is `log2(max|u1 - u2| / max|u2 - u4|)` over the probe
/// set.
///
/// The base grid must place every probe on a node: `nf - 1` divisible by 8 and
/// `nt` even.
pub fn convergence_order(params: &ModelParams, band: &Band, base: &GridSpec) -> Result<ConvergenceOrders> {
    base.validate()?;
    if !(base.nf - 1).is_multiple_of(8) {
        return Err(Error::param("nf", format!("nf - 1 must be divisible by 8, got nf = {}", base.nf)));
    }
    if !base.nt.is_multiple_of(2) {
        return Err(Error::param("nt", format!("nt must be even, got {}", base.nt)));
    }

    let spatial: Vec<Vec<f64>> = [base.nf, 2 * base.nf - 1, 4 * base.nf - 3]
        .into_iter()
        .map(|nf| probe(&solve_nonstationary(params, band, &GridSpec { nf, ..*base })?))
        .collect::<Result<_>>()?;
    let temporal: Vec<Vec<f64>> = [base.nt, 2 * base.nt, 4 * base.nt]
        .into_iter()
        .map(|nt| probe(&solve_nonstationary(params, band, &GridSpec { nt, ..*base })?))
        .collect::<Result<_>>()?;

    Ok(ConvergenceOrders { order_f: observed_order("f", &spatial)?, order_t: observed_order("t", &temporal)? })
}

fn probe(surface: &Surface) -> Result<Vec<f64>> {
    let nf = surface.nf();
    let nt = surface.t_axis.len() - 1;
    let mut out = Vec::with_capacity(PROBE_TIMES.len() * PROBE_POSITIONS.len());
    for tf in PROBE_TIMES {
        let k = (tf * nt as f64).round() as usize;
        for pf in PROBE_POSITIONS {
            let i = (pf * (nf - 1) as f64).round() as usize;
            out.push(surface.value(k, i));
        }
    }
    Ok(out)
}

fn observed_order(axis: &'static str, levels: &[Vec<f64>]) -> Result<f64> {
    let sup_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let coarse = sup_diff(&levels[0], &levels[1]);
    let fine = sup_diff(&levels[1], &levels[2]);
    if !(fine > 0.0 && fine < coarse) {
        return Err(Error::Diagnostics { axis, differences: [coarse, fine] });
    }
    Ok((coarse / fine).log2())
}
