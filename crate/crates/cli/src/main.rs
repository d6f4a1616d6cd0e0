use std::process::ExitCode;

use giantatom_cli::{run, CliError};

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(std::env::args_os().collect(), &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("giantatom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
