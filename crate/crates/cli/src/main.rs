use std::process::ExitCode;

use clap::Parser;

use ramsey_cli::{execute, Cli};

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}
