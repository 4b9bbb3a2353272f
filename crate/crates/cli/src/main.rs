//! `bilap`: spectra of the bulk-boundary Bilaplacian from the command line.
//!
//! Exit status is 0 on success, 2 for invalid arguments and 3 when a
//! computation fails. JSON goes to stdout unless `--output` is given; CSV
//! files start with a `# schema=1` line.

mod args;
mod commands;
mod figures;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(bilap_core::Error),
    Io(std::io::Error),
    Failed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn failed(what: &str) -> Self {
        CliError::Failed(format!("{what} reported failures"))
    }

    fn exit_code(&self) -> u8 {
        use bilap_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Argument(_) | E::Domain(_) | E::Precondition(_)) => 2,
            CliError::Core(_) | CliError::Io(_) | CliError::Failed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<bilap_core::Error> for CliError {
    fn from(e: bilap_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// `--threads`, else `BILAP_THREADS`, else rayon's default.
fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("BILAP_THREADS") {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("BILAP_THREADS must be a positive integer, got {v:?}")))?,
            ),
            _ => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::usage("thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(format!("cannot start thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Ball(a) => commands::ball(a),
        Command::Annulus(a) => commands::annulus(a),
        Command::Bifurcation(a) => commands::bifurcation(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Evolve(a) => commands::evolve_cmd(a),
        Command::Figure(f) => figures::run(&f.figure),
        Command::Selftest(a) => commands::selftest_cmd(a),
        Command::SpecfunSelftest(a) => commands::specfun_selftest(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bilap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
