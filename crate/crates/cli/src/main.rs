use std::process::ExitCode;

use clap::Parser;
use perazzo_cli::{run, Cli, EXIT_FAILED, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            if let Some(path) = &outcome.output {
                if let Err(e) = std::fs::write(path, &outcome.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT as u8);
                }
            } else {
                print!("{}", outcome.text);
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
