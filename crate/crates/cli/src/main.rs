//! Command-line front end: simulation, estimation, benchmarking, parametric
//! fitting, and sequence-space diagnostics.

mod commands;
mod io;
mod series;

use clap::Parser;

fn main() {
    let cli = commands::Cli::parse();
    if let Err(err) = commands::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
