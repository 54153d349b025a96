use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use theta_tails_cli::{exit_code, run, Cli, Command};

fn out_path(cli: &Cli) -> Option<&std::path::Path> {
    let out = match &cli.command {
        Command::Constants { out, .. }
        | Command::Orbit { out, .. }
        | Command::Partition { out, .. }
        | Command::Curlicue { out, .. }
        | Command::Tail { out, .. }
        | Command::ThetaTail { out, .. } => out,
    };
    out.out.as_deref()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let written = match out_path(&cli) {
        Some(p) => std::fs::write(p, &output.main),
        None => std::io::stdout().write_all(output.main.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if let Some(side) = output.side {
        eprint!("{side}");
    }
    ExitCode::SUCCESS
}
