use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use indexp_cli::commands::{self, VerifyOptions, DEFAULT_CONDUCTORS};

#[derive(Parser)]
#[command(name = "indexp", version, about = "Decompose representations induced from prime-index normal subgroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and verify a character table.
    Chartab {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify an instance and predict its decomposition.
    Classify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Decompose an instance by brute force.
    Decompose {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Check a corpus and sweep its groups.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_CONDUCTORS)]
        conductors: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        max_order: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// also write the report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<commands::Output> {
    match cli.command {
        Command::Chartab { input, output } => commands::chartab(&input, output.as_deref()),
        Command::Classify { input } => commands::classify_cmd(&input),
        Command::Decompose { input } => commands::decompose_cmd(&input),
        Command::Verify { corpus, conductors, max_order, jobs, report } => {
            if conductors.contains(&0) {
                anyhow::bail!("conductors must be positive");
            }
            let opts = VerifyOptions { conductors, max_order, jobs, report };
            commands::verify(&corpus, &opts).map(|(_, out)| out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
