mod args;
mod commands;
mod output;

use clap::Parser;

use args::{Cli, Command};
use commands::CliResult;

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Spectrum(a) => commands::run_spectrum(a),
        Command::Criteria(a) => commands::run_criteria(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Heatkernel(a) => commands::run_heatkernel(a),
        Command::Resolvent(a) => commands::run_resolvent(a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = dispatch(&cli) {
        eprintln!("error: {:#}", failure.error);
        std::process::exit(failure.code);
    }
}
