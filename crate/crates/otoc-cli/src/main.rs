//! Binary entry point: flag dispatch and exit-status mapping.

mod cli;
mod config;
mod error;
mod experiment;
mod output;
mod sweep;
mod verify;

use clap::Parser;

fn main() {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        // Help/version print and exit 0; parse errors print and exit 2.
        Err(e) => e.exit(),
    };
    let result = match &parsed.command {
        Some(cli::Command::Sweep(flags)) => sweep::execute_sweep(flags),
        Some(cli::Command::Verify(flags)) => verify::execute_verify(flags),
        None => parsed
            .run
            .to_config()
            .and_then(|cfg| experiment::execute_run(&cfg)),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
