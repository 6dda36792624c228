use clap::Parser;
use protocol_complexity::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
