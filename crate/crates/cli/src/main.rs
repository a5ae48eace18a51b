use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cubic_image_cli::{run_and_write, Command, RunConfig, SEED_ENV};

#[derive(Parser)]
#[command(name = "cubic-image", version, about = "Images of multilinear cubics on matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Seed for all randomized choices.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Draws per structured sampler.
    #[arg(long, global = true, default_value_t = 64)]
    max_tries: usize,
    /// Rounds of the randomized linear fallback.
    #[arg(long, global = true, default_value_t = 256)]
    fallback_tries: usize,
    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the image of f on n x n matrices.
    Classify {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        n: usize,
        /// Q, cyclotomic:N, gf:P, gf:P:K or an inline JSON field.
        #[arg(long)]
        field: String,
        #[arg(long)]
        regime: Option<String>,
    },
    /// Find X, Y, Z with f(X, Y, Z) = T.
    Solve {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// The target file holds Jordan data {d, nu, P?} instead of a matrix.
        #[arg(long)]
        jordan: bool,
    },
    /// Check the root-of-unity condition for (field, n).
    CheckCond {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
    },
    /// Enumerate the image over GF(q) by brute force.
    Oracle {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Jordan form of a matrix.
    Jordan {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(3);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let command = match cli.command {
        Cmd::Classify { poly, n, field, regime } => Command::Classify { poly, n, field, regime },
        Cmd::Solve { poly, target, field, n, jordan } => Command::Solve { poly, target, field, n, jordan },
        Cmd::CheckCond { field, n } => Command::CheckCond { field, n },
        Cmd::Oracle { poly, n, q, samples, .. } => Command::Oracle { poly, n, q, samples },
        Cmd::Jordan { target, field } => Command::Jordan { target, field },
    };
    let cfg = RunConfig {
        command,
        seed: cli.seed,
        max_tries: cli.max_tries,
        fallback_tries: cli.fallback_tries,
        output: cli.output,
    };
    ExitCode::from(run_and_write(&cfg) as u8)
}
