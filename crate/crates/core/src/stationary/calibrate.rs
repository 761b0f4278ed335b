use super::{odd_basis_jet, stationary_jet, Band, ModelParams, StationaryCoefficients};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 60;
/// Stop once both residuals are this small.
const TARGET_RESIDUAL: f64 = 1e-14;
/// Accept a stalled iteration only below this level (floating-point floor).
const ACCEPT_RESIDUAL: f64 = 1e-11;
/// Largest Kummer argument we are willing to start from.
const MAX_START_Z: f64 = 200.0;

/// Calibrated symmetric band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub coefs: StationaryCoefficients,
    pub band: Band,
    /// `[e(f_bar) - e_bar, e'(f_bar)]` at the returned solution.
    pub residuals: [f64; 2],
    pub iterations: usize,
}

impl Calibration {
    pub fn f_bar(&self) -> f64 {
        self.band.f_hi
    }
}

/// Solve `e(f_bar) = e_bar`, `e'(f_bar) = 0` for `(C2, f_bar)` with `C1 = 0`.
///
/// Damped Newton with an analytic Jacobian, started from the free-float
/// preimage `f_bar = (1 + alpha rho) e_bar`, `C2 = 0`. Steps are halved until
/// the residual norm decreases and `f_bar` stays positive.
pub fn calibrate_symmetric(params: &ModelParams, e_bar: f64) -> Result<Calibration> {
    params.validate()?;
    if params.mu != 0.0 {
        return Err(Error::param("mu", "symmetric calibration requires mu = 0"));
    }
    if params.rho == 0.0 {
        return Err(Error::param("rho", "rho = 0 is the Brownian-motion fundamental; use calibrate_bm"));
    }
    if !(e_bar > 0.0 && e_bar.is_finite()) {
        return Err(Error::param("e_bar", format!("must be positive, got {e_bar}")));
    }

    let f_start = e_bar / params.free_float_slope();
    // The honeymoon effect makes the band wider than the free-float preimage,
    // so this bounds the Kummer argument from below.
    let z_start = params.rho * f_start * f_start / (params.sigma * params.sigma);
    if z_start > MAX_START_Z {
        return Err(Error::NoSolution(format!(
            "e_bar = {e_bar} needs f_bar > {f_start}, outside the range of the Kummer series"
        )));
    }

    let system = |x: [f64; 2]| -> Result<([f64; 2], [[f64; 2]; 2])> {
        let [c2, f_bar] = x;
        let coefs = StationaryCoefficients { c1: 0.0, c2 };
        let e = stationary_jet(params, &coefs, f_bar)?;
        let basis = odd_basis_jet(params, f_bar)?;
        Ok(([e.value - e_bar, e.d1], [[basis.value, e.d1], [basis.d1, e.d2]]))
    };

    let (x, residuals, iterations) =
        damped_newton(system, [0.0, f_start], |x| x[1] > 0.0)?;
    let [c2, f_bar] = x;
    Ok(Calibration {
        coefs: StationaryCoefficients { c1: 0.0, c2 },
        band: Band::symmetric(f_bar, e_bar),
        residuals,
        iterations,
    })
}

fn norm(r: &[f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

fn max_abs(r: &[f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

fn damped_newton<F, A>(system: F, x0: [f64; 2], admissible: A) -> Result<([f64; 2], [f64; 2], usize)>
where
    F: Fn([f64; 2]) -> Result<([f64; 2], [[f64; 2]; 2])>,
    A: Fn(&[f64; 2]) -> bool,
{
    let mut x = x0;
    let (mut r, mut jac) = system(x)?;
    for iteration in 0..MAX_ITERATIONS {
        if max_abs(&r) <= TARGET_RESIDUAL {
            return Ok((x, r, iteration));
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Calibration { iterations: iteration, residuals: r });
        }
        let step = [
            (jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            (jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];

        let mut damping = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = [x[0] - damping * step[0], x[1] - damping * step[1]];
            if admissible(&trial) {
                if let Ok((tr, tj)) = system(trial) {
                    if norm(&tr) < norm(&r) {
                        accepted = Some((trial, tr, tj));
                        break;
                    }
                }
            }
            damping *= 0.5;
        }
        match accepted {
            Some((nx, nr, nj)) => {
                x = nx;
                r = nr;
                jac = nj;
            }
            None if max_abs(&r) <= ACCEPT_RESIDUAL => return Ok((x, r, iteration)),
            None => return Err(Error::Calibration { iterations: iteration, residuals: r }),
        }
    }
    if max_abs(&r) <= ACCEPT_RESIDUAL {
        Ok((x, r, MAX_ITERATIONS))
    } else {
        Err(Error::Calibration { iterations: MAX_ITERATIONS, residuals: r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::{eval_stationary, eval_stationary_slope, stationary_ode_residual};
    use approx::assert_relative_eq;

    // 60-digit bisection of the value equation after eliminating C2 through the
    // slope equation (mpmath hyp1f1).
    const F_BAR_REFERENCE: f64 = 0.088_656_647_474_682_54;
    const C2_REFERENCE: f64 = 0.009_381_598_529_683_75;

    /// Independent oracle: plain series, C2 eliminated, bisection in f_bar.
    fn bisection_oracle(alpha: f64, rho: f64, sigma: f64, e_bar: f64) -> (f64, f64) {
        fn series(a: f64, b: f64, z: f64) -> f64 {
            let (mut term, mut sum, mut n) = (1.0_f64, 1.0_f64, 0.0);
            while term.abs() > 1e-17 * sum {
                term *= (a + n) * z / ((b + n) * (n + 1.0));
                sum += term;
                n += 1.0;
            }
            sum
        }
        let s = rho.sqrt() / sigma;
        let a = (1.0 + alpha * rho) / (2.0 * alpha * rho);
        let k = 1.0 / (1.0 + alpha * rho);
        let c2_of = |f: f64| {
            let z = s * s * f * f;
            let dy = -s * series(a, 1.5, z) - 2.0 * s.powi(3) * f * f * (a / 1.5) * series(a + 1.0, 2.5, z);
            -k / dy
        };
        let g = |f: f64| k * f + c2_of(f) * (-s * f * series(a, 1.5, s * s * f * f)) - e_bar;
        let (mut lo, mut hi) = (1e-9, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f = 0.5 * (lo + hi);
        (f, c2_of(f))
    }

    #[test]
    fn reference_parameters_converge() {
        let params = ModelParams::default();
        let cal = calibrate_symmetric(&params, 0.01).unwrap();
        assert!(max_abs(&cal.residuals) < 1e-10, "{:?}", cal.residuals);
        assert_eq!(cal.coefs.c1, 0.0);
        assert_relative_eq!(cal.f_bar(), F_BAR_REFERENCE, max_relative = 1e-10);
        assert_relative_eq!(cal.coefs.c2, C2_REFERENCE, max_relative = 1e-9);

        let (f_oracle, c2_oracle) = bisection_oracle(3.0, 1.0, 0.1, 0.01);
        assert_relative_eq!(cal.f_bar(), f_oracle, max_relative = 1e-10);
        assert_relative_eq!(cal.coefs.c2, c2_oracle, max_relative = 1e-9);
    }

    #[test]
    fn band_edges_and_smooth_pasting() {
        let params = ModelParams::default();
        let cal = calibrate_symmetric(&params, 0.01).unwrap();
        let e = |f| eval_stationary(&params, &cal.coefs, f).unwrap();
        assert!((e(cal.f_bar()) - 0.01).abs() < 1e-10);
        assert!((e(-cal.f_bar()) + 0.01).abs() < 1e-10);
        for f in [cal.f_bar(), -cal.f_bar()] {
            assert!(eval_stationary_slope(&params, &cal.coefs, f).unwrap().abs() < 1e-10);
        }
        assert_eq!(cal.band, Band::symmetric(cal.f_bar(), 0.01));
    }

    #[test]
    fn calibrated_curve_is_below_free_float_slope() {
        let params = ModelParams::default();
        let cal = calibrate_symmetric(&params, 0.01).unwrap();
        let f_bar = cal.f_bar();
        for i in 1..400 {
            let f = -f_bar + 2.0 * f_bar * i as f64 / 400.0;
            let slope = eval_stationary_slope(&params, &cal.coefs, f).unwrap();
            assert!(slope < params.free_float_slope(), "f={f}: {slope}");
        }
    }

    #[test]
    fn shifted_homogeneous_part_keeps_ode_residual_zero() {
        let params = ModelParams::default();
        let cal = calibrate_symmetric(&params, 0.01).unwrap();
        let shifted = StationaryCoefficients { c1: 0.0, c2: cal.coefs.c2 + 0.1 };
        let grid: Vec<f64> = (0..401).map(|i| -cal.f_bar() + 2.0 * cal.f_bar() * i as f64 / 400.0).collect();
        for coefs in [cal.coefs, shifted] {
            let r = stationary_ode_residual(&params, &coefs, &grid).unwrap();
            let worst = r.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            assert!(worst < 1e-12, "{worst}");
        }
    }

    #[test]
    fn matches_oracle_across_persistence() {
        for rho in [2.0, 0.5, 0.1, 0.01, 0.001] {
            let params = ModelParams { rho, ..ModelParams::default() };
            let cal = calibrate_symmetric(&params, 0.01).unwrap();
            let (f_oracle, _) = bisection_oracle(3.0, rho, 0.1, 0.01);
            assert_relative_eq!(cal.f_bar(), f_oracle, max_relative = 1e-9);
        }
    }

    #[test]
    fn precondition_errors() {
        let params = ModelParams::default();
        assert!(matches!(calibrate_symmetric(&params, 0.0), Err(Error::InvalidParameter { name: "e_bar", .. })));
        let shifted = ModelParams { mu: 0.01, ..params };
        assert!(matches!(calibrate_symmetric(&shifted, 0.01), Err(Error::InvalidParameter { name: "mu", .. })));
        let bm = ModelParams { rho: 0.0, ..params };
        assert!(matches!(calibrate_symmetric(&bm, 0.01), Err(Error::InvalidParameter { name: "rho", .. })));
    }

    #[test]
    fn enormous_band_has_no_solution() {
        let err = calibrate_symmetric(&ModelParams::default(), 5.0).unwrap_err();
        assert!(matches!(err, Error::NoSolution(_)), "{err}");
    }
}
