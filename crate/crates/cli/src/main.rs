use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod run;

use args::Cli;

pub const SCHEMA: &str = "positroidlab/v1";

pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.verified { 0 } else { EXIT_VERIFY })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
