use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use smoothlab_cli::{compare_runs, load_record, run_file, RunOptions};
use smoothlab_core::family::catalog;

#[derive(Parser)]
#[command(name = "lab", version, about = "Run smoothness experiments from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its outputs.
    Run {
        scenario: PathBuf,
        /// Output directory (default: the scenario's output_dir, else runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; does not affect outputs.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Diff two run records (run.json files or run directories).
    Compare { a: PathBuf, b: PathBuf },
    /// List the parametric spectrum families and their verdicts.
    Catalog,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { scenario, out, threads } => {
            if threads == Some(0) {
                anyhow::bail!("--threads must be >= 1");
            }
            let opts = RunOptions { out_dir: out, threads };
            let (record, dir) =
                run_file(&scenario, &opts).with_context(|| format!("running {}", scenario.display()))?;
            println!("{} ({}) -> {}", record.scenario, record.experiment, dir.display());
            for (k, v) in &record.outcome {
                println!("  {k}: {v}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { a, b } => {
            let ra = load_record(&a)?;
            let rb = load_record(&b)?;
            let diff = compare_runs(&ra, &rb)?;
            if diff.is_empty() {
                println!("no differences");
                return Ok(ExitCode::SUCCESS);
            }
            for d in &diff {
                println!("{}: {} -> {}", d.field, d.a, d.b);
            }
            Ok(ExitCode::from(1))
        }
        Command::Catalog => {
            for e in catalog() {
                println!("{}", e.id);
                println!("  formula: {}", e.formula);
                println!("  verdict: {}", e.verdict_rule);
                let v = e
                    .example
                    .uniform_verdict()
                    .map_or("grid scan".to_string(), |v| v.label().to_string());
                println!("  example: {} -> {}", e.example.describe(), v);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
