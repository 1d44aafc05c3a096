//! `dw`: batch front end for expanding, recovering and checking Donaldson series.

use std::process::ExitCode;

use clap::Parser;
use donaldson_cli::args::Cli;
use donaldson_cli::commands::{self, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("dw: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Report(out, e)) => {
            print!("{out}");
            eprintln!("dw: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("dw: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
