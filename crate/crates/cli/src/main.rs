use std::process::ExitCode;

use clap::Parser;
use conjloc::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; --help and --version are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli).and_then(|out| out.emit()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("conjloc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
