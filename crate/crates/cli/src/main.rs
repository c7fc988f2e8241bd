mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn json_requested(command: &Command) -> bool {
    match command {
        Command::Evolve(a) => a.common.json,
        Command::Criteria(a) => a.common.json,
        Command::Sweep(a) => a.common.json,
        // both always answer with a JSON object
        Command::Primed(_) => true,
        Command::Scaling(a) => a.common.json,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if std::env::args().any(|a| a == "--json") {
                let rendered = e.render().to_string();
                let first = rendered.lines().next().unwrap_or_default();
                let message = first.trim_start_matches("error: ").to_string();
                return CliError::Usage(message).report(true);
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };

    let started = Instant::now();
    let result = match &cli.command {
        Command::Evolve(a) => commands::evolve(a),
        Command::Criteria(a) => commands::criteria(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Primed(a) => commands::primed(a),
        Command::Scaling(a) => commands::scaling(a),
    };
    match result {
        Ok(()) => {
            eprintln!(
                "{} finished in {:.3} s",
                output::TOOL,
                started.elapsed().as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => e.report(json_requested(&cli.command)),
    }
}
