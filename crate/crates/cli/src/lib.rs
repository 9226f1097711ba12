//! Command-line front end: parameter sweeps, figure tables and oracle
//! verification, written as CSV or JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod table;

use std::fs;
use std::io::Write;

use args::Cli;
use error::{CliError, EXIT_OK, EXIT_VERIFY_FAILED};

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    for (name, tol) in [("rel-tol", g.rel_tol), ("abs-tol", g.abs_tol)] {
        if let Some(x) = tol {
            if !(x.is_finite() && x > 0.0) {
                return Err(CliError::Config(format!(
                    "--{name} must be positive, got {x}"
                )));
            }
        }
    }
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let outcome = commands::run(&cli.command, g)?;
    let mut stdout_text = String::new();
    for line in &outcome.report {
        stdout_text.push_str(line);
        stdout_text.push('\n');
    }
    match (&g.out, outcome.verify_passed) {
        (Some(path), _) => fs::write(path, outcome.table.render(g.format)?)?,
        (None, None) => stdout_text.push_str(&outcome.table.render(g.format)?),
        (None, Some(_)) => {}
    }
    let mut lock = std::io::stdout().lock();
    match lock
        .write_all(stdout_text.as_bytes())
        .and_then(|()| lock.flush())
    {
        // A closed downstream pipe is not a failure of the computation.
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(match outcome.verify_passed {
        Some(false) => EXIT_VERIFY_FAILED,
        _ => EXIT_OK,
    })
}
