use clap::Parser;

use scenec::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
