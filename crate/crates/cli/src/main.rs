use std::process::ExitCode;

use clap::Parser;

use keychain_cli::{emit_report, run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let result = run(&config).and_then(|outputs| {
        let mut stdout = std::io::stdout().lock();
        emit_report(&outputs, config.out.as_deref(), config.format, &mut stdout)
    });
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
