// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use typlab::harness::{self, RunOverrides};

#[derive(Parser)]
#[command(name = "typlab", version, about = "Dynamical typicality laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured ensemble and write CSV, metadata and plot.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output.directory`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed (overrides `base_seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the verification checks and print a pass/fail table.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the spectral moments c_1..c_8 of the configured observable.
    Moments {
        #[arg(long)]
        config: PathBuf,
    },
    /// Render stats.csv (and trajectories.csv) as SVG.
    Plot {
        #[arg(long)]
        stats: PathBuf,
        #[arg(long)]
        trajectories: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> typlab::Result<()> {
    harness::init_thread_pool()?;
    match command {
        Command::Run { config, out, seed } => {
            let summary = harness::cmd_run(&config, &RunOverrides { out_dir: out, seed })?;
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
        }
        Command::Verify { config } => {
            let report = harness::cmd_verify(&config)?;
            print!("{report}");
            report.into_result()?;
        }
        Command::Moments { config } => {
            let report = harness::cmd_moments(&config)?;
            print!("{report}");
            let flagged = report.flagged();
            if !flagged.is_empty() {
                println!("flagged: {}", flagged.join(", "));
            }
        }
        Command::Plot {
            stats,
            trajectories,
            out,
        } => {
            harness::cmd_plot(&stats, trajectories.as_deref(), &out)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
