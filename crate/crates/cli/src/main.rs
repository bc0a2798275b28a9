use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

mod commands;
mod input;
mod output;

use commands::Cli;
use output::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let format = cli.global.format;
    let timing = cli.global.timing;
    match commands::run(&cli) {
        Ok(report) => {
            let wall_ms = timing.then(|| started.elapsed().as_secs_f64() * 1e3);
            print!("{}", report.render(format, wall_ms));
            ExitCode::from(report.status.code())
        }
        Err(failure) => {
            eprintln!("permx: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(msg) | Failure::Internal(msg) => f.write_str(msg),
        }
    }
}
