//! `appell`: batch verification runner and object inspector for the
//! appell-core coefficient calculus.
//!
//! Exit codes: 0 all cases within tolerance (or nothing to run), 1 at least
//! one tolerance violation (the report is still written), 2 usage or
//! configuration errors.

mod config;
mod report;
mod show;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use config::Config;
use report::{Report, SuiteReport};
use show::Format;
use suites::{run_suite, SuiteContext, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "appell", version, about = "Appell-system verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a JSON config and emit a JSON report.
    Run(RunArgs),
    /// Dump a named object (kernel tables, delta coefficients) as JSON or text.
    Show(ShowArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Suites to run (repeatable); defaults to the config's `suites` list.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock seconds per suite (reports are then not byte-stable).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ShowArgs {
    /// Object id, e.g. appell-b/gaussian/6 or delta0/poisson:1/4.
    #[arg(long)]
    object: String,
    /// Output format: json or table.
    #[arg(long, default_value = "table")]
    format: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Show(args) => cmd_show(args),
    };
    match outcome {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<bool> {
    let config = Config::load(&args.config)?;
    let requested = if args.suites.is_empty() {
        config.suites.clone()
    } else {
        args.suites.clone()
    };
    for name in &requested {
        if !SUITE_NAMES.contains(&name.as_str()) {
            bail!("unknown suite {name:?} (expected one of {SUITE_NAMES:?})");
        }
    }
    let seed = args.seed.unwrap_or(config.seed);
    let ctx = SuiteContext {
        config: &config,
        seed,
    };

    let mut suite_reports = Vec::with_capacity(requested.len());
    for name in &requested {
        let start = Instant::now();
        let cases = run_suite(name, &ctx)?;
        let mut suite = SuiteReport::new(name.clone(), cases);
        if args.timings {
            suite.seconds = Some(start.elapsed().as_secs_f64());
        }
        for case in &suite.cases {
            eprintln!(
                "{name}/{case}: {verdict} (residual {residual:.3e}, tol {tol:.0e})",
                case = case.case,
                verdict = if case.pass { "pass" } else { "FAIL" },
                residual = case.residual,
                tol = case.tolerance,
            );
        }
        suite_reports.push(suite);
    }

    let report = Report::new(seed, config.truncation, suite_reports);
    let text = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}

fn cmd_show(args: ShowArgs) -> Result<bool> {
    let format = Format::parse(&args.format)?;
    let text = show::run_show(&args.object, format)?;
    print!("{text}");
    Ok(true)
}
