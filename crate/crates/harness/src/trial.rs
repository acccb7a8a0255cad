//! One trial: generate an instance, then run every requested algorithm on it.

use std::collections::BTreeSet;
use std::time::Instant;

use plantedbip::certificate::certify;
use plantedbip::degree::{in_degree_regime, recover_by_degree};
use plantedbip::instance::{apply_monotone_adversary, gen_random_planted, gen_semi_random, gnp};
use plantedbip::sdp::{extract_planted_set, solve_primal_sdp};
use plantedbip::seed::{mix, trial_rng};
use plantedbip::subspace::{recover_subspace, RecoveryFailure};
use plantedbip::PlantedInstance;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Algorithm, AlgorithmSettings, Cell, ExperimentConfig, Model};

// stream indices for randomness derived from a trial seed
const OUTSIDE_STREAM: u64 = 1;
const ADVERSARY_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Returned exactly the planted set.
    Recovered,
    /// Returned a set that differs from the planted one.
    WrongSet,
    /// Ran to completion without producing a set.
    NoOutput,
    Certified,
    NotCertified,
    Error,
    /// Instance generation failed, nothing ran.
    GenerationError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Recovered => "recovered",
            Status::WrongSet => "wrong_set",
            Status::NoOutput => "no_output",
            Status::Certified => "certified",
            Status::NotCertified => "not_certified",
            Status::Error => "error",
            Status::GenerationError => "generation_error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmOutcome {
    pub algorithm: Algorithm,
    pub status: Status,
    /// Exact recovery, or a certificate passing every check.
    pub success: bool,
    /// `|output Δ S|`; absent when no set was produced.
    pub sym_diff: Option<usize>,
    pub output: Option<Vec<usize>>,
    pub diagnostics: Value,
    /// Excluded from serialization so results stay byte-reproducible.
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub cell: Cell,
    pub trial: usize,
    pub seed: u64,
    pub generation_error: Option<String>,
    pub outcomes: Vec<AlgorithmOutcome>,
}

pub fn trial_seed(master_seed: u64, cell_index: usize, trial: usize) -> u64 {
    mix(mix(master_seed, cell_index as u64), trial as u64)
}

pub fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let a: BTreeSet<_> = a.iter().collect();
    let b: BTreeSet<_> = b.iter().collect();
    a.symmetric_difference(&b).count()
}

/// The instance of one trial, adversary applied.
pub fn generate(cfg: &ExperimentConfig, cell: &Cell, seed: u64) -> plantedbip::Result<PlantedInstance> {
    let params = cell.params()?;
    let inst = match cfg.model {
        Model::Random => gen_random_planted(params, &cfg.topology, seed)?,
        Model::SemiRandom => {
            let outside = gnp(params.n - params.k, params.p, &mut trial_rng(seed, OUTSIDE_STREAM));
            gen_semi_random(params, &cfg.topology, &outside, seed)?
        }
    };
    match &cfg.adversary {
        Some(a) => apply_monotone_adversary(&inst, a, &mut trial_rng(seed, ADVERSARY_STREAM)),
        None => Ok(inst),
    }
}

fn set_outcome(algorithm: Algorithm, inst: &PlantedInstance, set: Vec<usize>, diagnostics: Value) -> AlgorithmOutcome {
    let diff = symmetric_difference(&set, &inst.planted_set());
    AlgorithmOutcome {
        algorithm,
        status: if diff == 0 { Status::Recovered } else { Status::WrongSet },
        success: diff == 0,
        sym_diff: Some(diff),
        output: Some(set),
        diagnostics,
        wall_seconds: 0.0,
    }
}

fn bare(algorithm: Algorithm, status: Status, success: bool, diagnostics: Value) -> AlgorithmOutcome {
    AlgorithmOutcome {
        algorithm,
        status,
        success,
        sym_diff: None,
        output: None,
        diagnostics,
        wall_seconds: 0.0,
    }
}

fn failure_kind(f: &RecoveryFailure) -> &'static str {
    match f {
        RecoveryFailure::WrongSize { .. } => "wrong_size",
        RecoveryFailure::Ambiguous { .. } => "ambiguous",
        RecoveryFailure::ShapeRejected { .. } => "shape_rejected",
    }
}

fn execute(alg: Algorithm, inst: &PlantedInstance, settings: &AlgorithmSettings) -> plantedbip::Result<AlgorithmOutcome> {
    let (k, d, p) = (inst.params.k, inst.params.d, inst.params.p);
    let g = &inst.graph;
    Ok(match alg {
        Algorithm::Degree => {
            let r = recover_by_degree(g, k)?;
            let diag = json!({ "ambiguous": r.ambiguous, "in_regime": in_degree_regime(k, d, p) });
            set_outcome(alg, inst, r.set, diag)
        }
        Algorithm::Sdp => {
            let sol = solve_primal_sdp(g, k, &settings.sdp)?;
            let mut diag = json!({
                "objective": sol.objective,
                "objective_gap": sol.objective + d as f64,
                "converged": sol.converged,
                "iterations": sol.iterations,
                "feasibility": sol.residuals.max(),
            });
            match extract_planted_set(&sol.x, k) {
                Ok(ex) => {
                    diag["margin_ratio"] = json!(ex.margin_ratio());
                    set_outcome(alg, inst, ex.set, diag)
                }
                Err(plantedbip::Error::ExtractionSize { found, .. }) => {
                    diag["extracted"] = json!(found);
                    bare(alg, Status::NoOutput, false, diag)
                }
                Err(e) => return Err(e),
            }
        }
        Algorithm::Subspace => {
            let params = settings.subspace.resolve(&inst.params);
            let report = recover_subspace(g, k, p, d, &params)?;
            let mut kinds = std::collections::BTreeMap::<&str, usize>::new();
            for (_, f) in &report.failures {
                *kinds.entry(failure_kind(f)).or_default() += 1;
            }
            let mut diag = json!({
                "dim": report.dim,
                "net_points": report.net_points,
                "candidates": report.candidates,
                "failures": kinds,
            });
            match report.recovered {
                Some(r) => {
                    diag["candidate_index"] = json!(r.candidate_index);
                    set_outcome(alg, inst, r.set, diag)
                }
                None => {
                    if let Some((_, first)) = report.failures.first() {
                        diag["first_failure"] = serde_json::to_value(first)?;
                    }
                    bare(alg, Status::NoOutput, false, diag)
                }
            }
        }
        Algorithm::Certify => {
            let run = certify(inst, &settings.certify)?;
            let base = json!({ "basis_dim": run.basis.len(), "t": run.t });
            match run.outcome {
                Ok((_, report)) => {
                    let passed = report.passed();
                    let mut diag = base;
                    diag["report"] = serde_json::to_value(&report)?;
                    let status = if passed { Status::Certified } else { Status::NotCertified };
                    bare(alg, status, passed, diag)
                }
                Err(failures) => {
                    let mut diag = base;
                    diag["infeasible_columns"] = json!(failures.iter().map(|f| f.column).collect::<Vec<_>>());
                    bare(alg, Status::NotCertified, false, diag)
                }
            }
        }
    })
}

/// Run one algorithm; errors are recorded in the outcome rather than returned.
/// Wall time covers the algorithm only.
pub fn run_algorithm(alg: Algorithm, inst: &PlantedInstance, settings: &AlgorithmSettings) -> AlgorithmOutcome {
    let start = Instant::now();
    let mut outcome = match execute(alg, inst, settings) {
        Ok(o) => o,
        Err(e) => bare(alg, Status::Error, false, json!({ "error": e.to_string() })),
    };
    outcome.wall_seconds = start.elapsed().as_secs_f64();
    outcome
}

/// Deterministic in `(master_seed, cell.index, trial)`.
pub fn run_trial(cfg: &ExperimentConfig, cell: &Cell, trial: usize) -> TrialResult {
    let seed = trial_seed(cfg.master_seed, cell.index, trial);
    let settings = cfg.settings();
    match generate(cfg, cell, seed) {
        Ok(inst) => TrialResult {
            cell: *cell,
            trial,
            seed,
            generation_error: None,
            outcomes: cfg.algorithms.iter().map(|&a| run_algorithm(a, &inst, &settings)).collect(),
        },
        Err(e) => TrialResult {
            cell: *cell,
            trial,
            seed,
            generation_error: Some(e.to_string()),
            outcomes: Vec::new(),
        },
    }
}
