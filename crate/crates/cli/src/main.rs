//! Scenario runner for exact rough-convergence verdicts.
//!
//! Exit codes: 0 on success, 1 when a verdict misses its expectation,
//! 2 on parse, semantic, or engine errors.

mod expr;
mod reproduce;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scenario::{parse_scenario, run_scenario};

#[derive(Parser)]
#[command(
    name = "roughlat",
    about = "Exact verdicts about rough convergence on vector lattices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its verdict.
    Check { file: PathBuf },
    /// Run every `.scn` scenario in a directory.
    Batch { dir: PathBuf },
    /// Re-run the bundled worked examples end to end.
    ReproducePaper {
        /// List the bundled reproductions without running them.
        #[arg(long)]
        list: bool,
    },
}

fn check_file(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return 2;
        }
    };
    let s = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return 2;
        }
    };
    match run_scenario(&s) {
        Ok(report) => {
            println!("{}", report.output);
            match report.matches {
                Some(false) => {
                    eprintln!(
                        "{}: verdict mismatch (expected `{}`)",
                        path.display(),
                        s.expect.as_deref().unwrap_or("")
                    );
                    1
                }
                _ => 0,
            }
        }
        Err(msg) => {
            eprintln!("{}: {}", path.display(), msg);
            2
        }
    }
}

fn batch(dir: &Path) -> u8 {
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "scn"))
            .collect(),
        Err(e) => {
            eprintln!("{}: {}", dir.display(), e);
            return 2;
        }
    };
    entries.sort();
    if entries.is_empty() {
        eprintln!("{}: no .scn scenarios found", dir.display());
        return 2;
    }
    let mut worst = 0u8;
    for path in entries {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        print!("{}: ", name);
        let code = check_file(&path);
        worst = worst.max(code);
    }
    worst
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { file } => check_file(&file),
        Command::Batch { dir } => batch(&dir),
        Command::ReproducePaper { list } => {
            let failures = reproduce::reproduce_all(list);
            if failures == 0 {
                0
            } else {
                1
            }
        }
    };
    ExitCode::from(code)
}
