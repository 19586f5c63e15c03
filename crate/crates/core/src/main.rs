use clap::Parser;

use silabi::cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    std::process::exit(run(cli));
}
