use clap::Parser;

use brickwork_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = brickwork_cli::run(&cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
