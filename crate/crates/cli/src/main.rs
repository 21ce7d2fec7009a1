use std::process::ExitCode;

use clap::Parser;
use thurston_core::parallel::{configured_threads, with_threads};
use thurston_kit::config::RunConfig;

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let report = match with_threads(configured_threads(), || config.run()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(config.format);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for c in &report.checks {
        eprintln!("{c}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
