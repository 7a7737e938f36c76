use std::process::ExitCode;

use clap::Parser;
use halfspace_cli::{execute, init_threads, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match init_threads().and_then(|_| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("halfspace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
