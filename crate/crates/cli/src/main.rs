//! `expsum` command-line front end: evaluate single sums, run verification
//! suites, and sweep progression or correlation sums over a cutoff grid.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or precondition error.

mod eval;
mod output;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "expsum", version, about = "Kloosterman-type sums, cusp sums and progression sweeps")]
struct Cli {
    /// Worker threads; EXPSUM_THREADS takes precedence when set.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one sum.
    Eval(eval::EvalArgs),
    /// Run a verification suite over a grid.
    Verify(verify::VerifyArgs),
    /// Partial sums over a geometric grid of cutoffs.
    Sweep(sweep::SweepArgs),
}

/// Outcome of a successful run.
pub enum Status {
    Ok,
    VerificationFailed,
}

fn thread_count(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    match std::env::var("EXPSUM_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("EXPSUM_THREADS must be a positive integer, got {v:?}"))?;
            anyhow::ensure!(n > 0, "EXPSUM_THREADS must be positive");
            Ok(Some(n))
        }
        Err(_) => {
            if flag == Some(0) {
                anyhow::bail!("--threads must be positive");
            }
            Ok(flag)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Eval(args) => eval::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Sweep(args) => sweep::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
