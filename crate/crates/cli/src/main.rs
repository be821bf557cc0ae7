use std::io::Write;
use std::process::ExitCode;

use bloch_cli::error::{EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};
use bloch_cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    match bloch_cli::run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_CHECK_FAILED);
            }
            if report.pass {
                ExitCode::from(EXIT_PASS)
            } else {
                eprintln!("bloch: a check failed");
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("bloch: {e}");
            e.exit_code()
        }
    }
}
