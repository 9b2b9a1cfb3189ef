//! `gyro` — scenario runner for relativistic gyroscope and observer-field
//! computations. `gyro run <config>` executes one scenario and writes its
//! report, `gyro sweep <config> --param name=start:stop:step` tabulates a
//! scenario over a parameter grid, `gyro list` describes the scenarios.
//!
//! Exit codes: 0 on success, 2 for configuration problems (unreadable or
//! invalid config, bad CLI arguments), 3 for numerical or output failures.

mod config;
mod error;
mod expr;
mod report;
mod scenario;
mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::error::CliError;
use crate::scenario::{run_scenario, SummaryValue};

#[derive(Parser)]
#[command(
    name = "gyro",
    version,
    about = "Scenario runner for relativistic gyroscope and observer-field computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config file and write its report
    Run {
        /// Path to a JSON config document (see `gyro list`)
        config: PathBuf,
    },
    /// Describe the scenarios and their config fields
    List,
    /// Re-run a scenario over an inclusive parameter grid
    Sweep {
        /// Path to a JSON config document used as the base of the grid
        config: PathBuf,
        /// Grid spec: name=start:stop:step with name one of omega, d_norm, h
        #[arg(long)]
        param: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::List => {
            print!("{LISTING}");
            Ok(())
        }
        Command::Run { config: path } => {
            let (config, echo) = load_config(&path)?;
            let started = Instant::now();
            let mut report = run_scenario(&config)?;
            let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            report.push(
                "runtime",
                SummaryValue::Text(format!("{runtime_ms:.1} ms")),
            );
            report::write_report(&config, &echo, &report)?;
            println!("scenario = {}", report.scenario);
            for (key, value) in &report.summary {
                println!("{key} = {value}");
            }
            println!("wrote {}", config.output.path);
            Ok(())
        }
        Command::Sweep {
            config: path,
            param,
        } => {
            let (config, _) = load_config(&path)?;
            let spec = sweep::parse_spec(&param)?;
            let table = sweep::run_sweep(&config, &spec)?;
            report::write_sweep(&config, &table)?;
            println!("scenario = {}", table.scenario);
            println!(
                "swept {} over {} values: {}",
                table.param,
                table.rows.len(),
                table.columns[1..].join(", ")
            );
            println!("wrote {}", config.output.path);
            Ok(())
        }
    }
}

fn load_config(path: &Path) -> Result<(Config, serde_json::Value), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let echo: serde_json::Value = serde_json::from_str(&text)?;
    let config = Config::from_json(&text)?;
    config.validate()?;
    Ok((config, echo))
}

const LISTING: &str = "\
scenarios (4 built-in, 1 free-form):

  thomas-circle         Gyroscope on a circular orbit, watched from the rest
                        observer: spin-direction trace, precession rate and its
                        time integral, net rotation after one revolution.
                        fields: omega, d_norm, profile, h, samples, integrator,
                                tolerances, output

  herrera-resolution    Four clock-rate profiles through one orbit; only the
                        conventional rotating field moves its rest spaces
                        rigidly, so only it admits a Foucault precession rate.
                        The other three would each report a different angle.
                        fields: omega, d_norm (> 0), samples, integrator,
                                tolerances, output

  noang-counterexample  Two observer fields containing the same circular world
                        line, one with vanishing angular velocity along it and
                        one rotating at the co-rotating spin rate: a world line
                        by itself has no angular velocity.
                        fields: omega, d_norm, samples, integrator, tolerances,
                                output

  gamma-twist           Co-moving observers carried with an extra constant
                        frame rotation; the gyroscope angle they measure
                        changes with the twist, and the twist-free angle is the
                        Thomas angle.
                        fields: omega, d_norm, gamma_twist (3 reals), samples,
                                integrator, tolerances, output

  custom                Any profile on any orbit: rigidity-criterion verdict
                        and defects, precession rate when one exists, Thomas
                        rotation of the orbit.
                        fields: omega, d_norm, profile, h, samples, integrator,
                                tolerances, output

profiles: conventional | h-family (needs h) | temporally-trivial | sqrt-alpha |
          const-alpha (clock rate frozen at the configured orbit), or a pair of
          expressions in k: {\"alpha\": \"cosh(sqrt(k))\", \"beta\": \"sinh(sqrt(k))/sqrt(k)\"}.

every config is JSON with \"schema\": 1, a \"scenario\" name, and an \"output\"
block {\"format\": \"csv\"|\"json\", \"path\": \"...\"}; the remaining fields default
to the unit orbit omega = 0.6, d_norm = 1, 64 samples, step 1e-3.
";
