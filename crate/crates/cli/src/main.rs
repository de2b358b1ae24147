use std::io::Write;
use std::process::ExitCode;

use buresgeo_cli::{run, Cli, EXIT_NUMERICAL, EXIT_VALIDATION};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &outcome.report),
                None => std::io::stdout().write_all(outcome.report.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_VALIDATION as u8);
            }
            match outcome.gate {
                Some(msg) => {
                    eprintln!("numerical check failed: {msg}");
                    ExitCode::from(EXIT_NUMERICAL as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
