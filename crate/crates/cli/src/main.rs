mod args;
mod commands;
mod output;

use clap::Parser;
use std::process::ExitCode;

use args::{Cli, Format};
use commands::CliError;

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("WARING_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage {
            flag: "WARING_THREADS",
            reason: format!("expected a positive integer, got {raw:?}"),
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .expect("thread pool configured once");
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let report = commands::run(cli)?;
    let text = match cli.format {
        Format::Csv => report.render_csv(),
        Format::Json => report.render_json(),
        Format::Pretty => report.render_pretty(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
