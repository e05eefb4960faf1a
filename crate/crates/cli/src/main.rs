mod commands;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "stparam", version, about = "Hodge parameters of semistable Deligne-Fontaine modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a parameter file and report its invariants.
    Check { input: PathBuf },
    /// Parameter file to extended bundle.
    Forward { input: PathBuf },
    /// Extended bundle to normalized parameter.
    Reconstruct { input: PathBuf },
    /// Forward then reconstruct (or the reverse for a bundle) and compare.
    Roundtrip { input: PathBuf },
    /// Randomized verification sweep.
    Sweep {
        kind: SweepKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        max_n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SweepKind {
    Fern,
    Dims,
    Extcomb,
    Jacobian,
}

/// Failure classes, mapped onto exit codes 1 and 2.
#[derive(Debug)]
pub enum Failure {
    Violated(String),
    Input(String),
}

impl From<stparam::Error> for Failure {
    fn from(e: stparam::Error) -> Self {
        use stparam::Error as E;
        match e {
            E::IdentityViolated(_) | E::DataInconsistent(_) | E::UnsupportedShape(_) | E::TransversalityViolated(_) => {
                Failure::Violated(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A report plus whether every assertion in it held.
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { input } => commands::check(&read(input)?),
        Command::Forward { input } => commands::forward(&read(input)?),
        Command::Reconstruct { input } => commands::reconstruct(&read(input)?),
        Command::Roundtrip { input } => commands::roundtrip(&read(input)?),
        Command::Sweep { kind, seed, trials, max_n } => sweep::run(*kind, *seed, *trials, *max_n),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let text = stparam::io::render(&o.report);
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Violated(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
