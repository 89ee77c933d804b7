use std::process::ExitCode;

use clap::Parser;
use hadwiger_cli::{run, CliError, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(EXIT_USAGE as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    match run(&cfg, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
