//! `hypermatch`: construct hypergraphs, evaluate bounds, solve matchings and
//! run the brute-force threshold oracles from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or usage,
//! 3 resource limit.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;
use hypermatch::Error;

use crate::args::Cli;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) | Error::Parse { .. } => 2,
        Error::ResourceLimit { .. } | Error::Indeterminate(_) => 3,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli, &argv[1..]) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.global.json {
                println!("{}", report::error_json(&cli, &argv[1..], &e));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
