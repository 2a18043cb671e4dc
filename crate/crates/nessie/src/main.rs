// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nessie::run::{run, RunOptions};

#[derive(Parser)]
#[command(name = "nessie", version, about = "Steady-state correlations and transport of two coupled qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML configuration (modes: point, sweep, cntd, rectmap).
    Run {
        config: PathBuf,
        /// Overrides `output.directory`.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker threads (default: one per core).
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            output_dir,
            threads,
        } => match run(&config, &RunOptions::from_env(output_dir, threads)) {
            Ok(summary) => {
                let m = &summary.manifest;
                println!(
                    "{} rows ({} with errors) in {:.2} s -> {}",
                    m.diagnostics.rows,
                    m.diagnostics.failed_rows,
                    m.wall_seconds,
                    summary.directory.display()
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
