//! `coreinv` command-line front end: exact generalized inverses with
//! certificates, candidate verification, controlled random generation and
//! batch theorem fuzzing.
//!
//! One JSON report goes to stdout; diagnostics go to stderr. Exit codes:
//! 0 when every requested verification holds, 2 on a non-existence
//! verdict or a failed certificate, 1 on an internal route disagreement
//! or theorem failure (a bug), 64 on usage, I/O or parse errors.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
