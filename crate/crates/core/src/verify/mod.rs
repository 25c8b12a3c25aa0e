//! Seeded suites, reports and fixtures.

pub mod config;
pub mod fixtures;
pub mod generate;
pub mod report;
pub mod suites;

use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use config::{Amplitudes, SuiteConfig, Tolerances};
pub use report::{CheckRecord, Environment, Format, Report};
pub use suites::{CheckDef, Kind, CHECKS, SUITES};

use crate::cocycles::fit_proportionality;
use crate::error::{Error, Result};
use generate::{trial_seed, Gen};
use suites::Ctx;

enum Outcome {
    Residual(f64),
    Sample(Vec<f64>, Vec<f64>),
}

struct TrialResult {
    outcome: Result<Outcome>,
    digest: String,
    millis: f64,
}

/// Suites selected by the configuration, in canonical order.
pub fn selected_suites(cfg: &SuiteConfig) -> Result<Vec<&'static str>> {
    if cfg.suites.is_empty() || cfg.suites.iter().any(|s| s == "all") {
        return Ok(SUITES.to_vec());
    }
    for s in &cfg.suites {
        if !SUITES.contains(&s.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {s}; known suites: all, {}",
                SUITES.join(", ")
            )));
        }
    }
    Ok(SUITES.iter().copied().filter(|s| cfg.suites.iter().any(|c| c == s)).collect())
}

fn run_trial(ctx: &Ctx, def: &CheckDef, trial: usize) -> TrialResult {
    let start = Instant::now();
    let mut gen = Gen::new(trial_seed(ctx.cfg.seed, def.id, trial), ctx.cfg.cap());
    let (outcome, digest) = match def.kind {
        Kind::Residual(run) => match run(ctx, &mut gen) {
            Ok(t) => (Ok(Outcome::Residual(t.residual)), t.digest),
            Err(e) => (Err(e), String::new()),
        },
        Kind::Proportional { run, .. } => match run(ctx, &mut gen) {
            Ok(s) => (Ok(Outcome::Sample(s.observed, s.reference)), s.digest),
            Err(e) => (Err(e), String::new()),
        },
    };
    TrialResult {
        outcome,
        digest,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs the selected suites and assembles a report. The report is a pure
/// function of the configuration unless `timings` is set.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    suites::check_registry()?;
    let chosen = selected_suites(cfg)?;
    let defs: Vec<&CheckDef> = CHECKS.iter().filter(|c| chosen.contains(&c.suite)).collect();
    let ctx = Ctx { cfg };
    let jobs: Vec<(usize, usize)> = defs
        .iter()
        .enumerate()
        .flat_map(|(i, d)| (0..d.trials.count(cfg)).map(move |t| (i, t)))
        .collect();
    let results: Vec<TrialResult> = jobs.par_iter().map(|&(i, t)| run_trial(&ctx, defs[i], t)).collect();

    let mut report = Report::new(Environment::from_config(cfg, chosen.iter().map(|s| s.to_string()).collect()));
    let mut cursor = 0;
    for def in &defs {
        let n = def.trials.count(cfg);
        let batch = &results[cursor..cursor + n];
        cursor += n;
        let tolerance = def.tol.value(&cfg.tolerances);
        let mut diagnostics = Vec::new();
        let mut hasher = Sha256::new();
        let mut worst: f64 = 0.0;
        let mut samples = Vec::new();
        for (t, r) in batch.iter().enumerate() {
            hasher.update(r.digest.as_bytes());
            hasher.update(b"\n");
            match &r.outcome {
                Ok(Outcome::Residual(x)) => worst = if x.is_nan() { f64::NAN } else { worst.max(*x) },
                Ok(Outcome::Sample(o, rf)) => samples.push((o.clone(), rf.clone())),
                Err(e) => diagnostics.push(format!("trial {t}: {e}")),
            }
        }
        if let Kind::Proportional { constant, .. } = def.kind {
            if diagnostics.is_empty() {
                let (k, dev) = fit_proportionality(&samples);
                report.constants.insert(constant.to_string(), k);
                worst = dev;
                if !(k.is_finite() && k != 0.0) {
                    diagnostics.push(format!("degenerate proportionality constant {k}"));
                }
            }
        }
        let residual = if diagnostics.is_empty() { Some(worst) } else { None };
        let pass = residual.is_some_and(|r| r <= tolerance);
        report.checks.push(CheckRecord {
            id: def.id.to_string(),
            suite: def.suite.to_string(),
            anchor: def.anchor.to_string(),
            inputs_digest: hex::encode(hasher.finalize()),
            residual,
            tolerance,
            pass,
            trials: n,
            diagnostics,
            wall_time_ms: cfg.timings.then(|| batch.iter().map(|r| r.millis).sum()),
        });
    }
    report.checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(report)
}
