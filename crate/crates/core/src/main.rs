use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use transmi::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    match cli::run(&args, &mut out, &mut err) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{}]: {message}", e.category());
            ExitCode::FAILURE
        }
    }
}
