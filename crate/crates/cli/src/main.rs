use std::process::ExitCode;

use clap::Parser;
use patankar_cli::{execute, self_test, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = self_test() {
        eprintln!("catalog self-test failed: {e}");
        return ExitCode::from(1);
    }
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
