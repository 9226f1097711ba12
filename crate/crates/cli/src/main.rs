use std::process::ExitCode;

use clap::Parser;
use solnoon_cli::args::Cli;
use solnoon_cli::execute;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("solnoon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
