use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use targetzone_cli::{parse_config, run_calibrate, run_figure, run_simulate, run_solve, CliError};

/// Exchange-rate target zone with a fixed entry date into a currency union.
#[derive(Debug, Parser)]
#[command(name = "targetzone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
    /// Plain-text `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Calibrate the stationary band and print its coefficients.
    Calibrate,
    /// Solve the finite-horizon problem on the calibrated band.
    Solve,
    /// Feynman-Kac Monte-Carlo estimate at one point, compared with the PDE.
    Simulate,
    /// Write the CSV data behind one of the four figures.
    Figure {
        /// Figure number, 1 to 4.
        #[arg(long)]
        which: u8,
    },
}

/// Values are kept as text so that they go through the same parser as the
/// config file.
#[derive(Debug, Args)]
struct Overrides {
    /// Money-demand semi-elasticity.
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Mean-reversion speed of the fundamental; 0 selects Brownian motion.
    #[arg(long, global = true)]
    rho: Option<String>,
    /// Volatility of the fundamental.
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// Long-run level of the fundamental.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Half-width of the exchange-rate band.
    #[arg(long = "e-bar", global = true)]
    e_bar: Option<String>,
    /// Time until entry into the union.
    #[arg(long, global = true)]
    horizon: Option<String>,
    /// Fundamental grid nodes.
    #[arg(long, global = true)]
    nf: Option<String>,
    /// Time steps.
    #[arg(long, global = true)]
    nt: Option<String>,
    /// Time-stepping weight: 0 explicit, 0.5 Crank-Nicolson, 1 implicit.
    #[arg(long, global = true)]
    theta: Option<String>,
    /// Monte-Carlo paths.
    #[arg(long, global = true)]
    paths: Option<String>,
    /// Monte-Carlo time step.
    #[arg(long, global = true)]
    dt: Option<String>,
    /// Monte-Carlo seed.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Starting point of `simulate` as a fraction of f_bar.
    #[arg(long = "f0-frac", global = true, allow_hyphen_values = true)]
    f0_frac: Option<String>,
    /// Time remaining at which `simulate` evaluates the rate.
    #[arg(long, global = true)]
    time: Option<String>,
    /// Comma-separated mean-reversion speeds for figure 4.
    #[arg(long, global = true)]
    rhos: Option<String>,
    /// Output CSV path.
    #[arg(long, global = true)]
    out: Option<String>,
}

impl Overrides {
    fn pairs(self) -> Vec<(String, String)> {
        [
            ("alpha", self.alpha),
            ("rho", self.rho),
            ("sigma", self.sigma),
            ("mu", self.mu),
            ("ebar", self.e_bar),
            ("horizon", self.horizon),
            ("nf", self.nf),
            ("nt", self.nt),
            ("theta", self.theta),
            ("paths", self.paths),
            ("dt", self.dt),
            ("seed", self.seed),
            ("f0frac", self.f0_frac),
            ("time", self.time),
            ("rhos", self.rhos),
            ("out", self.out),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file_text = match &cli.config {
        Some(path) => {
            fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
        }
        None => String::new(),
    };
    let cfg = parse_config(&file_text, &cli.overrides.pairs())?;
    let files = match cli.command {
        Command::Figure { which } => run_figure(which, &cfg)?,
        command => {
            let output = match command {
                Command::Calibrate => run_calibrate(&cfg)?,
                Command::Solve => run_solve(&cfg)?,
                _ => run_simulate(&cfg)?,
            };
            print!("{}", output.report);
            output.files
        }
    };
    for file in files {
        eprintln!("wrote {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
