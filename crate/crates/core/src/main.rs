use std::io;
use std::process::ExitCode;

use clap::Parser;
use jmspin::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("jmspin: {err}");
            ExitCode::from(err.code as u8)
        }
    }
}
