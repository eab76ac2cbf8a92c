//! `chland`: command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical
//! non-convergence (reports are still written), 4 I/O failure.

mod commands;
mod config;
mod error;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{Flags, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "chland", version, about = "Cahn-Hilliard energy landscape on the flat torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Constants and extrema of the limit model as CSV.
    Constants(Flags),
    /// Volume-constrained minimiser at --omega (default nu_m).
    Minimize(Flags),
    /// Barrier sweep over [--omega-min, --omega-max].
    Sweep(Flags),
    /// Energy along the droplet path ending at --omega.
    Path(Flags),
    /// Shape report of a field file (or of the droplet at --omega).
    Diagnose(Flags),
    /// Steiner symmetrisation of a field file.
    Symmetrize(Flags),
    /// Local minimiser in the ball around the limit droplet.
    Localmin(Flags),
}

type Handler = fn(&RunConfig) -> Result<Outcome, CliError>;

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let (flags, f): (&Flags, Handler) = match &cli.command {
        Command::Constants(a) => (a, commands::constants),
        Command::Minimize(a) => (a, commands::minimize),
        Command::Sweep(a) => (a, commands::sweep),
        Command::Path(a) => (a, commands::path),
        Command::Diagnose(a) => (a, commands::diagnose),
        Command::Symmetrize(a) => (a, commands::symmetrize),
        Command::Localmin(a) => (a, commands::localmin),
    };
    let cfg = RunConfig::from_flags(flags)?;
    f(&cfg)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::NotConverged) => {
            eprintln!("chland: did not converge");
            3
        }
        Err(e) => {
            eprintln!("chland: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
