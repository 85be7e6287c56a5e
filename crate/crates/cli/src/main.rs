//! `symevac`: generate stadium sector scenarios, dump floor fields and
//! symmetry fields, run evacuations and compare layouts.

mod cmd;
mod error;
mod io;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;
use crate::settings::{Settings, SimFlags};

#[derive(Debug, Parser)]
#[command(name = "symevac", version, about = "Symmetry-guided stadium sector evacuation")]
struct Cli {
    /// `key = value` settings file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective settings and exit
    #[arg(long)]
    print_config: bool,
    #[command(flatten)]
    sim: SimFlags,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a scenario file for a generated layout
    Gen(cmd::gen::GenArgs),
    /// Dump the desired-velocity field of a scenario
    Field(cmd::field::FieldArgs),
    /// Basis rows, composed fields and transformation checks on orbit 4i
    Sym(cmd::sym::SymArgs),
    /// Simulate one evacuation
    Run(cmd::run::RunArgs),
    /// Run two scenarios over several seeds and compare them
    Compare(cmd::compare::CompareArgs),
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let settings = Settings::load(cli.config.as_deref(), &cli.sim)?;
    if cli.print_config {
        print!("{}", settings.render());
        return Ok(());
    }
    match cli.command {
        None => Err(CliError::Config("no subcommand given (try --help)".into())),
        Some(Command::Gen(args)) => cmd::gen::run(&args),
        Some(Command::Field(args)) => cmd::field::run(&args),
        Some(Command::Sym(args)) => cmd::sym::run(&args),
        Some(Command::Run(args)) => cmd::run::run(&args, &settings),
        Some(Command::Compare(args)) => cmd::compare::run(&args, &settings),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.class());
            ExitCode::FAILURE
        }
    }
}
