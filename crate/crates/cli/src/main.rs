//! `bornlab` command line: builds theories, runs the property checks and writes
//! JSON or CSV artifacts with their configuration embedded.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use commands::Command;
use config::{CommonArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "bornlab", version, about = "State spaces from PU(d) representations and their operational properties")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

fn run(cli: &Cli) -> bornlab::Result<()> {
    let cfg = RunConfig::resolve(&cli.common)?;
    let name = cli.command.name();
    let out = cli.command.run(&cfg)?;
    let meta = output::metadata(name, &cfg, cli.command.theory_label(&cfg));
    let bytes = output::render(name, &cfg, meta, out)?;
    output::emit(name, &cfg, &bytes)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bornlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
