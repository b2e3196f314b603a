use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;

use conjwalk_cli::commands::{self, Command};
use conjwalk_cli::config::{self, Format};

/// Exact experiments on conjugacy-invariant random walks.
///
/// Exit status is 0 when every check in the report passes, 1 when a check
/// fails and 2 on configuration or runtime errors.
#[derive(Debug, Parser)]
#[command(name = "conjwalk", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Report destination; overrides `out` in the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `threads` in the config.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: &Cli) -> Result<bool> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&cli.config).with_context(|| format!("reading {}", cli.config.display()))?;
    let mut cfg = config::parse(&text).with_context(|| format!("{}", cli.config.display()))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        anyhow::ensure!(threads > 0, "--threads must be at least 1");
        cfg.threads = threads;
    }
    let mut report = commands::run(cli.command, &cfg)?;
    report.wall_clock_seconds = started.elapsed().as_secs_f64();

    let out = cli.out.clone().or_else(|| cfg.out.clone().map(PathBuf::from));
    let mut sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match cfg.format {
        Format::Csv => report.write_csv(&mut sink)?,
        Format::Json => report.write_json(&mut sink)?,
    }
    sink.flush()?;

    let verdict = if report.passed { "PASS" } else { "FAIL" };
    eprintln!("{} {verdict}: {} rows, {} failures", cli.command.name(), report.rows.len(), report.failures.len());
    for f in report.failures.iter().take(10) {
        eprintln!("  {f}");
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
