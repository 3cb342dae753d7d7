//! `delta-chow`: characteristic sets, differential Chow forms and
//! differential resultants from the command line.

mod args;
mod commands;
mod docs;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Format};
use commands::{CliError, Output};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let args::Command::Docs = cli.command {
        print!("{}", docs::markdown());
        return ExitCode::SUCCESS;
    }
    let format = cli.global.format();
    let result = commands::run(&cli);
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            let _ = writeln!(stdout, "{}", render(&out, format));
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            let _ = writeln!(stdout, "{}", render(&out, format));
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(e)) => {
            let v = json!({"error": e.code(), "message": e.to_string()});
            match format {
                Format::Json => {
                    let _ = writeln!(stdout, "{v}");
                }
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
            }
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Json => out.json.to_string(),
        Format::Text => out.text.clone(),
    }
}
