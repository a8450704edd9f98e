use std::process::ExitCode;

use clap::Parser;
use conecalc_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("conecalc: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let echoed: Vec<String> = strip_output(&argv);
    let report = run(&cli, echoed);
    let text = report.to_json();
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("conecalc: {e}");
        return ExitCode::from(1);
    }
    if let Some(err) = &report.error {
        eprintln!("conecalc: {}", err["message"].as_str().unwrap_or("error"));
    }
    ExitCode::from(report.exit_code() as u8)
}

/// The output destination does not affect the report, so it is not echoed.
fn strip_output(argv: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--output" {
            it.next();
        } else if !a.starts_with("--output=") {
            out.push(a.clone());
        }
    }
    out
}
