use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use qhorn_cli::{exit, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => qhorn_cli::run(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_usage());
            ExitCode::from(exit::USAGE)
        }
    }
}
