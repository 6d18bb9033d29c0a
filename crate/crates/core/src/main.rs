use clap::Parser;

use platoon_lateral::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
