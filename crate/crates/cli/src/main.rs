//! `spinshift` command-line driver.
//!
//! Exit codes: 0 when every check passes, 1 on a scientific failure
//! (mismatch, solver breakdown, integrator failure), 2 on invalid input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "spinshift", version, about = "Shift-operator toolkit for XXX and Haldane-Shastry rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact sector spectra next to closed-form predictions.
    Spectrum(SpectrumArgs),
    /// Solve the Bethe equations for one quantum-number set.
    Bethe(BetheArgs),
    /// Run the invariant suite for one chain.
    Verify(VerifyArgs),
    /// Scan a drive frequency across ladder transitions.
    Resonance(ResonanceArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Xxx,
    Hs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Hamiltonian family.
    #[arg(long, value_enum, default_value = "xxx")]
    pub model: ModelArg,
    /// Number of sites on the ring.
    #[arg(long)]
    pub n: Option<usize>,
    /// Nearest-neighbour exchange for the XXX model.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    /// Overall scale of the Haldane-Shastry couplings.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j0: f64,
    /// Report format on stdout or in --out
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Sectors (number of down spins); defaults to every sector small enough
    /// for dense diagonalization.
    #[arg(long, value_delimiter = ',')]
    pub sector: Vec<usize>,
    /// Largest accepted gap between a prediction and the nearest eigenvalue.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct BetheArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated integers or p/q half-integers, e.g. 3/2,-3/2.
    #[arg(long, allow_hyphen_values = true)]
    pub qn: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Eigen-residual tolerance for closed-form states.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws per randomized check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct ResonanceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ground-level energy of a bare two-level system (used with --e1).
    #[arg(long, allow_negative_numbers = true)]
    pub e0: Option<f64>,
    /// Excited-level energy; selects the two-level demo instead of a ladder.
    #[arg(long, allow_negative_numbers = true)]
    pub e1: Option<f64>,
    /// Dipole element of the two-level demo.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub dipole: f64,
    /// Number of ladder rungs (sectors 0, 1, ...) for the model-based system.
    #[arg(long, default_value_t = 2)]
    pub rungs: usize,
    /// Drive amplitude ℰ.
    #[arg(long, default_value_t = 0.02, allow_negative_numbers = true)]
    pub field: f64,
    /// Lower end of the scan; defaults to 0.8 times the smallest Bohr frequency
    #[arg(long, allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    /// Upper end of the scan; defaults to 1.2 times the largest Bohr frequency
    #[arg(long, allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Evenly spaced frequencies in the scan, endpoints included
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Integration window; defaults to one full Rabi cycle at resonance.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Step size; defaults to 200 steps per period of the fastest term.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Keep the counter-rotating terms.
    #[arg(long)]
    pub full: bool,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Spectrum(a) => &a.common,
            Command::Bethe(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Resonance(a) => &a.common,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("SPINSHIFT_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                spinshift::par::configure_threads(t);
            }
            _ => {
                eprintln!("error: SPINSHIFT_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let outcome = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Bethe(a) => commands::bethe(a),
        Command::Verify(a) => commands::verify(a),
        Command::Resonance(a) => commands::resonance(a),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(commands::Failure::Science(msg)) => {
            eprintln!("failure: {msg}");
            return ExitCode::from(1);
        }
    };
    let common = cli.command.common();
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "check failed: {} = {} (tolerance {}){}",
            c.name,
            c.value,
            c.tolerance,
            c.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default()
        );
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
