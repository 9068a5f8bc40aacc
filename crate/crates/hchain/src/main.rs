use clap::Parser;
use hchain::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("hchain: {e}");
        std::process::exit(e.exit_code());
    }
}
