//! Parameter sweeps with CSV output.
//!
//! The results file starts with `# plantedbip-results v1` and holds one row per
//! (cell, trial, algorithm) in that order, independent of worker count. Wall
//! times go to a separate `<stem>.timings.csv` so the results stay
//! byte-reproducible; success rates go to `<stem>.summary.json`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Algorithm, Cell, ExperimentConfig};
use crate::error::Result;
use crate::trial::{run_trial, Status, TrialResult};

pub const RESULTS_HEADER: &str = "# plantedbip-results v1";
pub const WORKERS_ENV: &str = "PLANTEDBIP_WORKERS";

pub const COLUMNS: [&str; 13] = [
    "cell", "n", "k", "d", "p", "alpha", "trial", "seed", "algorithm", "status", "success", "sym_diff", "diagnostics",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: Cell,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub successes: usize,
    pub generation_errors: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub results: PathBuf,
    pub timings: PathBuf,
    pub summary_path: PathBuf,
    pub rows: usize,
    pub summary: Vec<CellSummary>,
}

/// `results.csv` -> `results.<suffix>`.
pub fn sibling(output: &Path, suffix: &str) -> PathBuf {
    output.with_extension(suffix)
}

/// Worker count from the environment, else rayon's default.
pub fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// One row per requested algorithm, also for trials whose generation failed.
fn rows(cfg: &ExperimentConfig, r: &TrialResult) -> Vec<(Algorithm, Status, bool, Option<usize>, String, f64)> {
    match &r.generation_error {
        Some(msg) => {
            let diag = serde_json::json!({ "error": msg }).to_string();
            cfg.algorithms
                .iter()
                .map(|&a| (a, Status::GenerationError, false, None, diag.clone(), 0.0))
                .collect()
        }
        None => r
            .outcomes
            .iter()
            .map(|o| (o.algorithm, o.status, o.success, o.sym_diff, o.diagnostics.to_string(), o.wall_seconds))
            .collect(),
    }
}

/// Run every (cell, trial) and stream rows into the two writers, flushing
/// after each batch so an interrupted sweep leaves complete rows behind.
pub fn sweep_into<W: Write, T: Write>(
    cfg: &ExperimentConfig,
    results: W,
    timings: T,
    workers: usize,
) -> Result<(usize, Vec<CellSummary>)> {
    cfg.validate()?;
    let mut results = results;
    writeln!(results, "{RESULTS_HEADER}")?;
    let mut out = csv::Writer::from_writer(results);
    let mut times = csv::Writer::from_writer(timings);
    out.write_record(COLUMNS)?;
    times.write_record(["cell", "trial", "algorithm", "wall_seconds"])?;

    let jobs: Vec<(Cell, usize)> = cfg
        .cells()
        .into_iter()
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let mut tallies: BTreeMap<(usize, Algorithm), (Cell, usize, usize, usize)> = BTreeMap::new();
    let mut count = 0;
    for batch in jobs.chunks(2 * workers.max(1)) {
        let done: Vec<TrialResult> = pool.install(|| batch.par_iter().map(|(c, t)| run_trial(cfg, c, *t)).collect());
        for r in &done {
            let c = &r.cell;
            for (alg, status, success, diff, diag, wall) in rows(cfg, r) {
                out.write_record([
                    c.index.to_string(),
                    c.n.to_string(),
                    c.k.to_string(),
                    c.d.to_string(),
                    c.p.to_string(),
                    c.alpha.to_string(),
                    r.trial.to_string(),
                    r.seed.to_string(),
                    alg.to_string(),
                    status.as_str().to_string(),
                    success.to_string(),
                    diff.map(|x| x.to_string()).unwrap_or_default(),
                    diag,
                ])?;
                times.write_record([c.index.to_string(), r.trial.to_string(), alg.to_string(), wall.to_string()])?;
                let e = tallies.entry((c.index, alg)).or_insert((*c, 0, 0, 0));
                e.1 += 1;
                e.2 += success as usize;
                e.3 += (status == Status::GenerationError) as usize;
                count += 1;
            }
        }
        out.flush()?;
        times.flush()?;
    }
    let summary = tallies
        .into_iter()
        .map(|((_, algorithm), (cell, trials, successes, generation_errors))| CellSummary {
            cell,
            algorithm,
            trials,
            successes,
            generation_errors,
            success_rate: successes as f64 / trials as f64,
        })
        .collect::<Vec<_>>();
    Ok((count, summary))
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let results = cfg.output.clone();
    let timings = sibling(&results, "timings.csv");
    let summary_path = sibling(&results, "summary.json");
    let (rows, summary) = sweep_into(
        cfg,
        BufWriter::new(File::create(&results)?),
        BufWriter::new(File::create(&timings)?),
        workers(),
    )?;
    let body = serde_json::json!({
        "version": 1,
        "master_seed": cfg.master_seed,
        "trials": cfg.trials,
        "rows": rows,
        "cells": summary,
    });
    std::fs::write(&summary_path, serde_json::to_string_pretty(&body)? + "\n")?;
    Ok(SweepReport {
        results,
        timings,
        summary_path,
        rows,
        summary,
    })
}
