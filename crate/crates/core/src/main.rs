use std::process::ExitCode;

use berge_ramsey::cli::{run, Cli, Outcome};
use clap::Parser;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Certified) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
