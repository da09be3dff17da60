use std::process::ExitCode;

use clap::Parser;
use peerlens_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match peerlens_cli::run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
