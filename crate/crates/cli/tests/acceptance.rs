//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use targetzone::{
    boundary_paths, calibrate_bm, calibrate_symmetric, convergence_order, eval_stationary, eval_stationary_slope,
    feynman_kac_estimate, kummer_m, kummer_m_dz, ou_bm_distance, solve_nonstationary, stationary_ode_residual,
    Calibration, GridSpec, KummerArgs, McConfig, ModelParams, Surface,
};
use targetzone_cli::{parse_config, run_figure, run_simulate};

const E_BAR: f64 = 0.01;
const TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reference() -> (ModelParams, Calibration) {
    let params = ModelParams::default();
    let cal = calibrate_symmetric(&params, E_BAR).expect("reference calibration");
    (params, cal)
}

fn solve(nf: usize, nt: usize) -> Surface {
    let (params, cal) = reference();
    solve_nonstationary(&params, &cal.band, &GridSpec::new(nf, nt, 0.5)).expect("PDE solve")
}

fn m(a: f64, b: f64, z: f64) -> f64 {
    kummer_m(KummerArgs::new(a, b, z), TOL).expect("series converges")
}

fn special_function_identities() -> Outcome {
    let zero_ok = [(0.5, 1.5), (1.0 / 6.0, 0.5), (-3.5, 2.0), (7.0, 0.1)].iter().all(|&(a, b)| m(a, b, 0.0) == 1.0);

    let exp_err = (0..=1000)
        .map(|i| {
            let z = -5.0 + 0.01 * i as f64;
            (m(1.0, 1.0, z) - z.exp()).abs()
        })
        .fold(0.0, f64::max);

    let mut min_order = f64::INFINITY;
    for (a, b, z) in [(2.0 / 3.0, 1.5, 0.09), (1.0 / 6.0, 0.5, 0.5), (1.5, 2.5, -1.0)] {
        let exact = kummer_m_dz(KummerArgs::new(a, b, z), TOL).expect("derivative");
        let err = |h: f64| ((m(a, b, z + h) - m(a, b, z - h)) / (2.0 * h) - exact).abs();
        min_order = min_order.min((err(1e-2) / err(5e-3)).log2());
    }
    check(
        zero_ok && exp_err < 1e-12 && min_order >= 1.9,
        format!("M(a,b,0)=1: {zero_ok}, max|M(1,1,z)-e^z| = {exp_err:.2e}, derivative FD order = {min_order:.3}"),
    )
}

fn stationary_closed_form() -> Outcome {
    let (params, cal) = reference();
    let residual = cal.residuals[0].abs().max(cal.residuals[1].abs());
    let grid: Vec<f64> = (0..401).map(|i| cal.band.f_lo + cal.band.width() * i as f64 / 400.0).collect();
    let ode = stationary_ode_residual(&params, &cal.coefs, &grid)
        .expect("ODE residual")
        .into_iter()
        .fold(0.0_f64, |w, r| w.max(r.abs()));
    check(
        residual < 1e-10 && ode < 1e-8,
        format!("system residual = {residual:.2e}, ODE residual = {ode:.2e}, f_bar = {}", cal.f_bar()),
    )
}

fn smooth_pasting() -> Outcome {
    let (params, cal) = reference();
    let slope = |f| eval_stationary_slope(&params, &cal.coefs, f).expect("slope").abs();
    let stationary = slope(cal.band.f_lo).max(slope(cal.band.f_hi));

    let coarse = solve(401, 3000);
    let fine = solve(801, 3000);
    let mut min_order = f64::INFINITY;
    for k in 1..coarse.t_axis.len() {
        let (cl, cu) = coarse.edge_slopes(k);
        let (fl, fu) = fine.edge_slopes(k);
        for (c, f) in [(cl, fl), (cu, fu)] {
            min_order = min_order.min((c / f).abs().log2());
        }
    }
    check(
        stationary < 1e-10 && min_order >= 1.8,
        format!("max|e'(+-f_bar)| = {stationary:.2e}, min per-step edge-slope order = {min_order:.3}"),
    )
}

fn terminal_condition() -> Outcome {
    let s = solve(401, 3000);
    let worst = s.row(0).iter().fold(0.0_f64, |w, e| w.max(e.abs()));
    check(worst == 0.0, format!("max|e(0,f)| = {worst:e}"))
}

fn stationarity_at_horizon() -> Outcome {
    let (params, cal) = reference();
    let s = solve(401, 3000);
    let last = s.t_axis.len() - 1;
    let distance = s
        .f_axis
        .iter()
        .zip(s.row(last))
        .map(|(&f, e)| (e - eval_stationary(&params, &cal.coefs, f).expect("stationary")).abs())
        .fold(0.0, f64::max);
    check(distance < 2e-3, format!("max|e(3,f) - e_stat(f)| = {distance:.3e}"))
}

fn band_shrinkage() -> Outcome {
    let paths = boundary_paths(&solve(401, 3000));
    let increasing = paths.windows(2).all(|w| w[1].e_upper > w[0].e_upper);
    let first = paths[0];
    let last = paths[paths.len() - 1];
    check(
        increasing && first.e_lower == 0.0 && first.e_upper == 0.0,
        format!(
            "e(t,f_bar) strictly increasing over {} nodes: {increasing}, e(0,+-f_bar) = ({}, {}), e(3,f_bar) = {:.6}",
            paths.len(),
            first.e_lower,
            first.e_upper,
            last.e_upper
        ),
    )
}

fn cross_method_agreement() -> Outcome {
    let (params, cal) = reference();
    let s = solve(401, 3000);
    let f_bar = cal.f_bar();
    // Each probe sits on a grid node: f = 0.5 f_bar is node 300 and 0.9 f_bar node 380.
    let probes = [(0.5, 0.0, 200), (1.0, 0.5 * f_bar, 300), (2.0, 0.9 * f_bar, 380)];
    let config = McConfig { n_paths: 200_000, dt: 1e-3, seed: 20_110_913, antithetic: Some(false), ..McConfig::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, f0, node) in probes {
        let pde = s.value(s.nearest_time_index(t).expect("time node"), node);
        let mc = feynman_kac_estimate(&params, &cal.band, f0, t, &config).expect("MC estimate");
        let z = (mc.mean - pde) / mc.std_error;
        ok &= z.abs() <= 3.0;
        parts.push(format!("({t}, {f0:.4}): z = {z:+.2}"));
    }
    check(ok, parts.join(", "))
}

fn bm_ou_relations() -> Outcome {
    let (params, cal) = reference();
    let bm = calibrate_bm(params.alpha, params.sigma, E_BAR).expect("BM calibration");
    let wider = cal.f_bar() > bm.f_bar();
    let distances: Vec<f64> = [0.5, 0.1, 0.01, 0.001]
        .iter()
        .map(|&rho| ou_bm_distance(&ModelParams { rho, ..params }, E_BAR, 2001).expect("distance"))
        .collect();
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let last = distances[distances.len() - 1];
    check(
        wider && decreasing && last < 1e-3,
        format!(
            "f_bar(rho=1) = {:.6} > f_bar_bm = {:.6}: {wider}, distances = [{}]",
            cal.f_bar(),
            bm.f_bar(),
            distances.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn numerical_order() -> Outcome {
    let (params, cal) = reference();
    let orders = convergence_order(&params, &cal.band, &GridSpec::new(41, 60, 0.5)).map_err(|e| e.to_string())?;
    check(
        orders.order_f >= 1.8 && orders.order_t >= 1.8,
        format!("order_f = {:.3}, order_t = {:.3}", orders.order_f, orders.order_t),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let pairs = |extra: &[(&str, String)]| -> Vec<(String, String)> {
        [("paths", "20000".to_string()), ("seed", "7".to_string()), ("nf", "201".to_string()), ("nt", "600".to_string())]
            .iter()
            .chain(extra)
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    };

    let mut reports = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("simulate_{run}.csv")).display().to_string();
        let cfg = parse_config("", &pairs(&[("out", out)])).map_err(|e| e.to_string())?;
        reports.push(run_simulate(&cfg).map_err(|e| e.to_string())?.report);
    }
    let same_report = reports[0] == reports[1];

    let mut same_csv = same_report
        && fs::read(dir.path().join("simulate_0.csv")).ok() == fs::read(dir.path().join("simulate_1.csv")).ok();
    let mut n_files = 2;
    for which in 1..=4u8 {
        let mut contents = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("run{run}/fig{which}.csv")).display().to_string();
            let cfg = parse_config("", &pairs(&[("out", out)])).map_err(|e| e.to_string())?;
            let files = run_figure(which, &cfg).map_err(|e| e.to_string())?;
            n_files += files.len();
            contents.push(files.iter().map(fs::read).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?);
        }
        same_csv &= contents[0] == contents[1];
    }
    check(
        same_report && same_csv,
        format!("simulate reports identical: {same_report}, {n_files} CSV files byte-identical: {same_csv}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("special-function identities", special_function_identities),
        ("stationary closed form", stationary_closed_form),
        ("smooth pasting", smooth_pasting),
        ("terminal condition", terminal_condition),
        ("stationarity at the horizon", stationarity_at_horizon),
        ("band shrinkage", band_shrinkage),
        ("cross-method agreement", cross_method_agreement),
        ("BM/OU relations", bm_ou_relations),
        ("numerical order", numerical_order),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match run() {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failures += 1;
                ("FAIL", detail)
            }
        };
        println!("{status} criterion {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
