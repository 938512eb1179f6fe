//! `gm-steady`: region sweeps, solves, certificates and kernel tables.

mod cmd;
mod config;
mod error;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliResult, EXIT_USAGE};

/// Radial steady states of the Gierer–Meinhardt system.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 hypothesis refusal,
/// 3 non-convergence or failed verification.
#[derive(Debug, Parser)]
#[command(name = "gm-steady", version)]
struct Cli {
    /// Add a `timestamp` field (Unix seconds) to JSON reports
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every point of a parameter lattice
    Region(cmd::region::RegionArgs),
    /// Solve the system or the singular scalar equation
    Solve(cmd::solve::SolveArgs),
    /// Check residuals of field dumps or of the closed-form bubble pair
    Verify(cmd::verify::VerifyArgs),
    /// Tabulate the fundamental solutions with the mass identity
    Kernel(cmd::kernel::KernelArgs),
    /// Inspect or generate field dumps
    Dump(cmd::dump::DumpArgs),
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    let stamp = cli.timestamp;
    match &cli.command {
        Command::Region(a) => cmd::region::run(a, stamp),
        Command::Solve(a) => cmd::solve::run(a, stamp),
        Command::Verify(a) => cmd::verify::run(a, stamp),
        Command::Kernel(a) => cmd::kernel::run(a, stamp),
        Command::Dump(a) => cmd::dump::run(a, stamp),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let code = dispatch(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
