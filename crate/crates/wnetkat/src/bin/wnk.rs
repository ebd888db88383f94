use clap::Parser;
use wnetkat::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("wnk: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
