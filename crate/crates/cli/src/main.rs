//! `symdyn`: subshift languages, entropy, decompositions, Markov diagrams,
//! pressure and ergodic optimization from the command line.
//!
//! Every command writes records tagged with the schema version, library
//! version, run seed and a SHA-256 of the parsed configuration. Exit status
//! is 0 on success, 1 on usage errors and 2 when a computation fails.

mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sha2::{Digest, Sha256};

use args::Cli;
use output::Emitter;

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(symdyn::Error),
    Io(io::Error),
}

impl From<symdyn::Error> for Failure {
    fn from(e: symdyn::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

pub fn config_hash(cli: &Cli) -> String {
    let canonical = serde_json::to_string(cli).expect("configuration serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout().lock();
    let mut emitter = Emitter::new(stdout, cli.format, cli.command.name(), &config_hash(&cli), cli.seed);
    let result = commands::run(&cli, &mut emitter);
    let code = match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(Failure::Domain(e)) => {
            let _ = emitter.emit("error", serde_json::json!({ "error": e.to_string() }));
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            2
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
