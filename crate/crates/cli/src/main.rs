use std::process::ExitCode;

use clap::Parser;
use spflow_cli::commands::INPUT_ERROR;
use spflow_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("spflow: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
