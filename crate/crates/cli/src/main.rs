use std::io::Read;
use std::process::ExitCode;

use clap::Parser;

use weilres_cli::{execute, render, Cli, CliError};

fn read_input(path: Option<&str>) -> Result<String, CliError> {
    let mut s = String::new();
    match path {
        None | Some("-") => {
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| CliError::Input(format!("stdin: {e}")))
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{p}: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = read_input(cli.input.as_deref()).and_then(|text| execute(&cli, &text));
    match result {
        Ok((report, passed)) => {
            let text = render(&report);
            match &cli.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: {p}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
