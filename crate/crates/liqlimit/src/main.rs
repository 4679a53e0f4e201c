use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use liqlimit::config::{ExperimentConfig, VarTableConfig};
use liqlimit::validate::{self, Level};
use liqlimit::{sweep, trajectory, vartable, Error};

#[derive(Parser)]
#[command(
    name = "liqlimit",
    version,
    about = "Option hedging with liquidation under small linear impact"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certainty equivalent against its scaling limit over a lambda sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the invariant suite; exits 1 if any check fails.
    Validate {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
    },
    /// Closed-form variational values against the grid oracle.
    VarTable {
        #[arg(long)]
        config: PathBuf,
    },
    /// Dump one simulated strategy path.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        path_index: u64,
        /// Impact level; defaults to the first value of `lambda_sweep`.
        #[arg(long)]
        lambda: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn run(cli: Cli) -> liqlimit::Result<ExitCode> {
    match cli.command {
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let report = sweep::run_sweep(&cfg, |row| {
                eprintln!(
                    "lambda = {}: ce = {} (se {}){}",
                    row.lambda,
                    row.estimate.value,
                    row.estimate.stderr_proxy,
                    if row.estimate.heavy_tailed() {
                        "  warning: heavy-tailed exponents, stderr unreliable"
                    } else {
                        ""
                    }
                );
            })?;
            report.table().write(cfg.output.as_deref())?;
        }
        Command::Validate { level } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let checks = validate::run(level, |line| println!("{line}"))?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
        Command::VarTable { config } => {
            let cfg = VarTableConfig::from_file(&config)?;
            let rows = vartable::run_var_table(&cfg)?;
            vartable::table(&rows).write(cfg.output.as_deref())?;
        }
        Command::Trajectory {
            config,
            path_index,
            lambda,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let lambda = lambda.unwrap_or(cfg.lambda_sweep[0]);
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::Config {
                    line: 0,
                    message: format!("--lambda {lambda} must lie in (0, 1)"),
                });
            }
            let (prices, traj) = trajectory::run_trajectory(&cfg, lambda, path_index)?;
            trajectory::table(&prices, &traj).write(cfg.output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numeric(_) => ExitCode::from(EXIT_VALIDATION),
                _ => ExitCode::from(EXIT_CONFIG),
            }
        }
    }
}
