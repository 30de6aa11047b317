mod commands;
mod config;
mod svg;

use std::io;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use commands::Outcome;
use config::{Cli, Command};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

fn write_outputs(out: &Outcome) -> io::Result<()> {
    let dir: &Path = &out.config.out_dir;
    let report = serde_json::json!({ "config": out.config, "result": out.result });
    let mut text = serde_json::to_string_pretty(&report).map_err(io::Error::other)?;
    text.push('\n');
    std::fs::write(dir.join("report.json"), text)?;
    if let Some(csv) = &out.csv {
        std::fs::write(dir.join("report.csv"), csv)?;
    }
    for (name, body) in &out.figures {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dir = &cli.command.common().out;
    if let Err(e) = std::fs::create_dir_all(dir) {
        eprintln!("error: output directory {} is not writable: {e}", dir.display());
        return ExitCode::from(EXIT_VALIDATION);
    }
    let outcome = match &cli.command {
        Command::Tv(a) => commands::tv(a),
        Command::Complete(a) => commands::complete(a),
        Command::Plateau(a) => commands::plateau(a),
        Command::Area(a) => commands::area(a),
        Command::Tangential(a) => commands::tangential(a),
        Command::VerifyRecovery(a) => commands::verify_recovery(a),
        Command::SliceCheck(a) => commands::slice_check(a),
    };
    let out = match outcome {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    if let Err(e) = write_outputs(&out) {
        eprintln!("error: cannot write to {}: {e}", out.config.out_dir.display());
        return ExitCode::from(EXIT_VALIDATION);
    }
    println!("{}", serde_json::to_string_pretty(&out.result).unwrap_or_default());
    if out.converged {
        ExitCode::SUCCESS
    } else {
        eprintln!("warning: minimizer stopped at the iteration cap; results were written");
        ExitCode::from(EXIT_NOT_CONVERGED)
    }
}
