use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bsc_sim::cli::{cmd_gen_trace, cmd_run, cmd_sweep, exit_code_for, CommonArgs};
use bsc_sim::metrics::Basis;
use bsc_sim::scenario::{PRESET_NAMES, SWEEP_PARAMS};

/// Deterministic simulator for HTTP adaptive streaming with backward-shifted
/// scalable coding.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or preset) and write summary.json plus timelines.
    Run {
        /// Scenario file (.toml or .json) or a preset name.
        config: String,
        /// Metrics basis: rendered (default) or requested.
        #[arg(long)]
        basis: Option<Basis>,
        /// Seeds to run, overriding the scenario's list.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Output directory (default: out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a scenario across values of one parameter; write sweep.csv.
    Sweep {
        config: String,
        /// What to vary.
        #[arg(long)]
        param: String,
        /// Values to try, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the capacity trace a scenario would synthesize.
    GenTrace {
        config: String,
        /// Destination CSV path.
        out: PathBuf,
        /// Seed to generate for (default: the scenario's first seed).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            basis,
            seeds,
            out,
        } => cmd_run(&CommonArgs {
            config,
            basis,
            seeds,
            out,
        })
        .map(|dir| println!("wrote {}", dir.join("summary.json").display())),
        Command::Sweep {
            config,
            param,
            values,
            seeds,
            out,
        } => {
            if !SWEEP_PARAMS.contains(&param.as_str()) {
                eprintln!(
                    "error: unknown sweep parameter `{param}` (have: {})",
                    SWEEP_PARAMS.join(", ")
                );
                return ExitCode::from(2);
            }
            cmd_sweep(
                &CommonArgs {
                    config,
                    basis: None,
                    seeds,
                    out,
                },
                &param,
                &values,
            )
            .map(|dir| println!("wrote {}", dir.join("sweep.csv").display()))
        }
        Command::GenTrace { config, out, seed } => {
            cmd_gen_trace(&config, &out, seed).map(|()| println!("wrote {}", out.display()))
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, bsc_sim::Error::Config(_)) {
                eprintln!("presets: {}", PRESET_NAMES.join(", "));
            }
            ExitCode::from(exit_code_for(&err))
        }
    }
}
