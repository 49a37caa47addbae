//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit status is 0 on success, 1 when a computation or write fails and 2
//! for usage errors.

pub mod args;
pub mod commands;

use std::ffi::OsString;
use std::io::Write;

pub use args::{parse_args, CommandKind, Params, RunConfig};
pub use commands::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// `--help` or `--version` output; printed to stdout with status 0.
    Help(String),
    Usage(String),
}

/// Parses, runs and writes; returns the process exit status.
pub fn run_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(CliError::Help(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            return EXIT_OK;
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            return EXIT_USAGE;
        }
    };
    // An explicit pool size keeps rayon from reading its environment variable.
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return EXIT_NUMERIC;
        }
    };
    let result = pool.install(|| run(&config)).and_then(|doc| {
        analog_search::output::write_document(&doc, config.format, &config.destination)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERIC
        }
    }
}
