//! `verify`: runs the seeded invariant suites and writes reports.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use torext::verify::{fixtures, run_suite, Format, SuiteConfig, SUITES};

#[derive(Debug, Parser)]
#[command(name = "verify", version, about = "Seeded invariant suites for torus diffeomorphism group extensions")]
struct Args {
    /// Comma-separated suite names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    suite: Vec<String>,

    #[arg(long, default_value_t = 2)]
    dim: usize,

    #[arg(long, default_value_t = 12)]
    degree: usize,

    #[arg(long, default_value_t = 2)]
    oversample: usize,

    #[arg(long, default_value_t = 25)]
    trials: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Tolerance for purely algebraic identities.
    #[arg(long)]
    tol_alg: Option<f64>,

    /// Tolerance for identities through composition.
    #[arg(long)]
    tol_comp: Option<f64>,

    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,

    /// CSV report path.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Regenerate golden fixtures into this directory and exit.
    #[arg(long, value_name = "DIR")]
    make_fixtures: Option<PathBuf>,

    /// Record wall time per check (reports are then not reproducible).
    #[arg(long)]
    timings: bool,

    /// Suppress the text summary on stdout.
    #[arg(long, short)]
    quiet: bool,

    /// List suites and exit.
    #[arg(long)]
    list: bool,
}

fn config(args: &Args) -> SuiteConfig {
    let mut cfg = SuiteConfig {
        dim: args.dim,
        degree: args.degree,
        oversample: args.oversample,
        trials: args.trials,
        seed: args.seed,
        suites: args.suite.clone(),
        timings: args.timings,
        ..SuiteConfig::default()
    };
    if let Some(t) = args.tol_alg {
        cfg.tolerances.algebraic = t;
    }
    if let Some(t) = args.tol_comp {
        cfg.tolerances.composition = t;
    }
    cfg
}

fn run(args: Args) -> anyhow::Result<bool> {
    if args.list {
        for s in SUITES {
            println!("{s}");
        }
        return Ok(true);
    }
    if let Some(dir) = &args.make_fixtures {
        for path in fixtures::make_fixtures(dir).with_context(|| format!("writing fixtures to {}", dir.display()))? {
            println!("wrote {}", path.display());
        }
        return Ok(true);
    }
    let report = run_suite(&config(&args))?;
    if let Some(path) = &args.report {
        report
            .emit(Format::Json, path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.csv {
        report
            .emit(Format::Csv, path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if !args.quiet {
        print!("{}", report.to_text());
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
