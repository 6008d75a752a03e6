mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lenspec::Error;

use crate::config::RunConfig;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Undecided(_) => commands::EXIT_PRECISION,
        Error::Budget(_) => 4,
        Error::Verification(_) => commands::EXIT_VERIFICATION,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cfg.common.out {
        Some(path) => std::fs::write(path, &outcome.body),
        None => std::io::stdout().lock().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    ExitCode::from(outcome.status)
}
