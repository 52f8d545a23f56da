use std::process::ExitCode;

use clap::Parser;
use twokaon_cli::config::{Cli, RunConfig};
use twokaon_cli::error::exit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match RunConfig::resolve(cli.command, &cli.flags) {
        Ok(cfg) => twokaon_cli::execute(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            exit::CONFIG_ERROR
        }
    };
    ExitCode::from(code as u8)
}
