//! Recovery by enumerating an ε-net of the bottom eigenspace of `A`.
//!
//! Some net vector lies close to the signed indicator of the planted set;
//! thresholding it gives a set that shares most of its vertices with `S`, and
//! neighbourhood matchings then separate the planted vertices exactly.

mod net;
mod recovery;

pub use net::{net_size, NetIter};
pub use recovery::{full_recovery, matching_score, verify_planted_shape, RecoveryFailure};

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{symmetric_eig, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceParams {
    pub tau_prime: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub net_cap: usize,
}

impl SubspaceParams {
    /// `τ' = d/2`, `ε = sqrt(3k sqrt(n) / (d/2 + 3 sqrt(n)))`, `δ = p²/16`, cap `10⁷`.
    pub fn defaults(n: usize, k: usize, d: usize, p: f64) -> Self {
        let (n, k, d) = (n as f64, k as f64, d as f64);
        SubspaceParams {
            tau_prime: d / 2.0,
            epsilon: (3.0 * k * n.sqrt() / (d / 2.0 + 3.0 * n.sqrt())).sqrt(),
            delta: p * p / 16.0,
            net_cap: 10_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_prime.is_nan() || self.tau_prime <= 0.0 {
            return Err(Error::InvalidParams(format!("tau' = {} must be positive", self.tau_prime)));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidParams(format!("epsilon = {} must be positive", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParams(format!("delta = {} must lie in (0, 1)", self.delta)));
        }
        Ok(())
    }
}

/// Orthonormal eigenvectors of `A` with eigenvalue at most `-τ'`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub tau_prime: f64,
    pub eigenvalues: Vec<f64>,
    /// `n x L'`.
    pub vectors: DMatrix<f64>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

pub fn bottom_subspace(g: &Graph, tau_prime: f64) -> Result<SubspaceBasis> {
    if tau_prime.is_nan() || tau_prime <= 0.0 {
        return Err(Error::InvalidParams(format!("tau' = {tau_prime} must be positive")));
    }
    let spectrum = symmetric_eig(&g.adjacency_matrix())?;
    let scale = spectrum.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let picked: Vec<usize> = (0..spectrum.len())
        .filter(|&i| spectrum.eigenvalues[i] <= -tau_prime + 1e-9 * scale)
        .collect();
    Ok(SubspaceBasis {
        tau_prime,
        eigenvalues: picked.iter().map(|&i| spectrum.eigenvalues[i]).collect(),
        vectors: spectrum.eigenvectors.select_columns(picked.iter()),
    })
}

/// `‖u - Π u‖²` for the orthogonal projection `Π` onto the basis span.
pub fn projection_gap(u: &DVector<f64>, basis: &SubspaceBasis) -> f64 {
    let coeff = basis.vectors.transpose() * u;
    (u.norm_squared() - coeff.norm_squared()).max(0.0)
}

/// Net over the radius-`radius` ball of the span, as coefficient vectors.
pub fn enumerate_net(basis: &SubspaceBasis, radius: f64, epsilon: f64) -> Result<NetIter> {
    NetIter::new(basis.dim(), radius, epsilon)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopK {
    pub set: Vec<usize>,
    /// The `k`-th and `(k+1)`-th largest magnitudes tie.
    pub degenerate: bool,
}

/// Indices of the `k` largest `|y_i|`, ties broken by ascending index.
pub fn threshold_top_k(y: &DVector<f64>, k: usize) -> TopK {
    let n = y.len();
    let k = k.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| y[b].abs().total_cmp(&y[a].abs()).then(a.cmp(&b)));
    let degenerate = k > 0 && k < n && y[order[k - 1]].abs() == y[order[k]].abs();
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    TopK { set, degenerate }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub set: Vec<usize>,
    /// First net point producing this set.
    pub net_index: usize,
    /// Best `Σ_{i∈set} |y_i| / (sqrt(k) ‖y‖)` over net points producing it.
    pub alignment: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateList {
    pub dim: usize,
    pub net_points: usize,
    pub candidates: Vec<Candidate>,
}

fn alignment(y: &DVector<f64>, set: &[usize]) -> f64 {
    let norm = y.norm();
    if norm == 0.0 || set.is_empty() {
        return 0.0;
    }
    set.iter().map(|&i| y[i].abs()).sum::<f64>() / ((set.len() as f64).sqrt() * norm)
}

/// Threshold every net vector, deduplicate, and order by descending alignment.
pub fn candidate_sets(g: &Graph, k: usize, params: &SubspaceParams) -> Result<CandidateList> {
    params.validate()?;
    if k == 0 || k > g.n() {
        return Err(Error::InvalidParams(format!("k = {k} must lie in [1, n = {}]", g.n())));
    }
    let basis = bottom_subspace(g, params.tau_prime)?;
    candidates_from_basis(&basis, k, params)
}

pub fn candidates_from_basis(basis: &SubspaceBasis, k: usize, params: &SubspaceParams) -> Result<CandidateList> {
    let radius = (k as f64).sqrt();
    net_size(basis.dim(), radius, params.epsilon, params.net_cap)?;
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut net_points = 0;
    for (index, q) in enumerate_net(basis, radius, params.epsilon)?.enumerate() {
        net_points += 1;
        let y = &basis.vectors * q;
        let top = threshold_top_k(&y, k);
        let a = alignment(&y, &top.set);
        match seen.get(&top.set) {
            Some(&c) => candidates[c].alignment = candidates[c].alignment.max(a),
            None => {
                seen.insert(top.set.clone(), candidates.len());
                candidates.push(Candidate {
                    set: top.set,
                    net_index: index,
                    alignment: a,
                    degenerate: top.degenerate,
                });
            }
        }
    }
    candidates.sort_by(|a, b| b.alignment.total_cmp(&a.alignment).then(a.net_index.cmp(&b.net_index)));
    Ok(CandidateList {
        dim: basis.dim(),
        net_points,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredSet {
    pub set: Vec<usize>,
    pub bipartition: (Vec<usize>, Vec<usize>),
    /// Position in the ordered candidate list.
    pub candidate_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceReport {
    pub dim: usize,
    pub empty_basis: bool,
    pub net_points: usize,
    pub candidates: usize,
    pub recovered: Option<RecoveredSet>,
    /// Failures of the candidates evaluated, by candidate index.
    pub failures: Vec<(usize, RecoveryFailure)>,
}

/// Candidates are evaluated in parallel batches; the lowest-index success wins.
pub fn recover_subspace(g: &Graph, k: usize, p: f64, d: usize, params: &SubspaceParams) -> Result<SubspaceReport> {
    let list = candidate_sets(g, k, params)?;
    let batch = 2 * rayon::current_num_threads().max(1);
    let mut failures = Vec::new();
    let mut recovered = None;
    for (start, chunk) in list.candidates.chunks(batch).enumerate().map(|(i, c)| (i * batch, c)) {
        let outcomes: Vec<std::result::Result<RecoveredSet, RecoveryFailure>> = chunk
            .par_iter()
            .enumerate()
            .map(|(offset, cand)| -> Result<_> {
                let set = match full_recovery(g, k, &cand.set, p, params.delta)? {
                    Ok(set) => set,
                    Err(f) => return Ok(Err(f)),
                };
                Ok(match verify_planted_shape(g, &set, d) {
                    Some(bipartition) => Ok(RecoveredSet {
                        set,
                        bipartition,
                        candidate_index: start + offset,
                    }),
                    None => Err(RecoveryFailure::ShapeRejected { set }),
                })
            })
            .collect::<Result<_>>()?;
        for (offset, out) in outcomes.into_iter().enumerate() {
            match out {
                Ok(r) => {
                    recovered = Some(r);
                    break;
                }
                Err(f) => failures.push((start + offset, f)),
            }
        }
        if recovered.is_some() {
            break;
        }
    }
    Ok(SubspaceReport {
        dim: list.dim,
        empty_basis: list.dim == 0,
        net_points: list.net_points,
        candidates: list.candidates.len(),
        recovered,
        failures,
    })
}
