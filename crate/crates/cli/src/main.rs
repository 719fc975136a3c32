use std::process::ExitCode;

use clap::Parser;
use limbadd_cli::args::{Cli, Command};
use limbadd_cli::commands::{self, Adders};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Add(args) => commands::add(args),
        Command::Verify(args) => {
            commands::verify(args, &Adders::standard(), &mut std::io::stdout().lock())
        }
        Command::Gen(args) => commands::gen(args),
        Command::Bench(args) => commands::bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("limbadd: {e}");
            e.exit_code()
        }
    }
}
