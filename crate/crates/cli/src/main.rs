use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use varbound::commands::{self, KindArg, DEFAULT_VERIFY_SEED, DEFAULT_VERIFY_TRIALS};
use varbound::CliError;
use varbound_core::BasisMode;

#[derive(Parser)]
#[command(name = "varbound", version, about = "Variance-product uncertainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Standard,
    Optimized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Callebaut,
    Milne,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound for a scenario.
    Bounds {
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the scenario's basis field.
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        /// Print JSON instead of key/value text.
        #[arg(long)]
        json: bool,
    },
    /// Sweep θ over the scenario's theta-state family and write CSV.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta_start: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta_end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Maximize one bound over orthonormal bases.
    Optimize {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "lambda")]
        lambda: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the randomized verification suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_VERIFY_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_VERIFY_TRIALS)]
        trials: usize,
        /// Corrupt one bound per trial; exercises the failure path in tests.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Bounds { scenario, basis, json } => {
            let basis = basis.map(|b| match b {
                BasisArg::Standard => BasisMode::Standard,
                BasisArg::Optimized => BasisMode::Optimized,
            });
            print!("{}", commands::cmd_bounds(&scenario, basis, json)?);
        }
        Command::Sweep { scenario, theta_start, theta_end, steps, output } => {
            let table = commands::cmd_sweep(&scenario, theta_start, theta_end, steps, &output)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), output.display());
        }
        Command::Optimize { scenario, kind, lambda, restarts, seed } => {
            let kind = match kind {
                Kind::Callebaut => KindArg::Callebaut,
                Kind::Milne => KindArg::Milne,
            };
            print!("{}", commands::cmd_optimize(&scenario, kind, lambda, restarts, seed)?);
        }
        Command::Verify { seed, trials, inject_fault } => {
            let (text, passed) = commands::cmd_verify(seed, trials, inject_fault)?;
            print!("{text}");
            if !passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("varbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
