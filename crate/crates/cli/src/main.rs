use clap::Parser;
use esu_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(&cli) {
        eprintln!("esu: {e}");
        std::process::exit(e.exit_code());
    }
}
