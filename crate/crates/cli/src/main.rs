use clap::Parser;
use isocurve_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
