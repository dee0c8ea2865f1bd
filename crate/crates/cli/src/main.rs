//! `driftlab`: principal eigenvalues of `-Δu + p a·∇u = λu` from the command line.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{resolve, Flags};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "driftlab", version, about = "Principal Dirichlet eigenvalues of gradient-drift operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// 1D eigenpairs: eigen.json, eigenfunction.csv
    Eig1d,
    /// Product-formula and closed-form asymptotics: asym.json, asym.csv
    Asym,
    /// Envelope, no-decay certificate and well bounds: bounds.json, bounds.csv
    Bounds,
    /// Potential wells and the multi-well bound: wells.json, wells.csv
    Well,
    /// Sweep over p and fit the decay exponent: sweep.csv, fit.json
    Sweep,
    /// Time integration in 2D: fit.json, norms.csv, profiles and sections
    Evolve2d,
    /// Life span 1/lambda and half-life ln2/lambda: lifespan.json, v1.csv
    Lifespan,
    /// Invariant suite: selfcheck.json
    Selfcheck,
}

impl Command {
    fn id(self) -> &'static str {
        match self {
            Command::Eig1d => "eig1d",
            Command::Asym => "asym",
            Command::Bounds => "bounds",
            Command::Well => "well",
            Command::Sweep => "sweep",
            Command::Evolve2d => "evolve2d",
            Command::Lifespan => "lifespan",
            Command::Selfcheck => "selfcheck",
        }
    }
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let cfg = resolve(&cli.flags, cli.command.id())?;
    let value = match cli.command {
        Command::Eig1d => commands::eig1d(&cfg),
        Command::Asym => commands::asym(&cfg),
        Command::Bounds => commands::bounds(&cfg),
        Command::Well => commands::well(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Evolve2d => commands::evolve2d(&cfg),
        Command::Lifespan => commands::lifespan(&cfg),
        Command::Selfcheck => commands::selfcheck(&cfg),
    }?;
    eprintln!("wrote {} artifacts to {}", cli.command.id(), cfg.out_dir().display());
    Ok(value)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(value) => {
            // a closed pipe downstream is not an error of the run
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&value).unwrap_or_default());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
