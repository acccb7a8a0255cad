//! The SDP relaxation: minimise `⟨A, X⟩` over PSD `X` with unit trace,
//! diagonal at most `1/k` and non-positive entries on edges.

mod admm;

pub use admm::solve_primal_sdp;

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{min_eigenvalue, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub abs_tol: f64,
    pub max_iterations: usize,
    /// Initial penalty.
    pub rho: f64,
    /// Rebalance `rho` from the residual ratio.
    pub adaptive_rho: bool,
    /// Over-relaxation factor in `[1, 2)`.
    pub relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-7,
            max_iterations: 50_000,
            rho: 1.0,
            adaptive_rho: true,
            relaxation: 1.6,
        }
    }
}

/// Largest violation per constraint family; all entries are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub psd: f64,
    pub trace: f64,
    pub diagonal: f64,
    pub edge_sign: f64,
}

impl FeasibilityReport {
    pub fn max(&self) -> f64 {
        self.psd.max(self.trace).max(self.diagonal).max(self.edge_sign)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

#[derive(Debug, Clone)]
pub struct GramSolution {
    pub x: DMatrix<f64>,
    pub objective: f64,
    pub residuals: FeasibilityReport,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `Σ_{{i,j} ∈ E} 2 X_ij`.
pub fn sdp_objective(x: &DMatrix<f64>, g: &Graph) -> f64 {
    g.edges().map(|(i, j)| x[(i, j)] + x[(j, i)]).sum()
}

pub fn check_feasibility(x: &DMatrix<f64>, g: &Graph, k: usize) -> Result<FeasibilityReport> {
    let cap = 1.0 / k as f64;
    Ok(FeasibilityReport {
        psd: (-min_eigenvalue(x)?).max(0.0),
        trace: (x.trace() - 1.0).abs(),
        diagonal: x.diagonal().iter().fold(0.0f64, |m, &v| m.max(v - cap)),
        edge_sign: g.edges().fold(0.0f64, |m, (i, j)| m.max(x[(i, j)]).max(x[(j, i)])),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    /// `{i : X_ii > θ}`, ascending.
    pub set: Vec<usize>,
    pub threshold: f64,
    /// Smallest diagonal entry inside the set.
    pub min_inside: f64,
    /// Largest diagonal entry outside the set (0 when everything is inside).
    pub max_outside: f64,
}

impl Extraction {
    pub fn margin_ratio(&self) -> f64 {
        self.min_inside / self.max_outside.max(f64::MIN_POSITIVE)
    }
}

/// Vertices whose diagonal entry exceeds `θ = 1/(2k)`; any other size than `k`
/// means the solution is not integral.
pub fn extract_planted_set(x: &DMatrix<f64>, k: usize) -> Result<Extraction> {
    let threshold = 1.0 / (2.0 * k as f64);
    let diag = x.diagonal();
    let set: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] > threshold).collect();
    if set.len() != k {
        return Err(Error::ExtractionSize { found: set.len(), expected: k });
    }
    let min_inside = set.iter().map(|&i| diag[i]).fold(f64::INFINITY, f64::min);
    let max_outside = (0..diag.len())
        .filter(|&i| diag[i] <= threshold)
        .map(|i| diag[i])
        .fold(0.0, f64::max);
    Ok(Extraction {
        set,
        threshold,
        min_inside,
        max_outside,
    })
}

/// Row-major text dump: one matrix row per line, entries as `{:e}`.
pub fn write_matrix<W: Write>(x: &DMatrix<f64>, mut w: W) -> Result<()> {
    for i in 0..x.nrows() {
        let row: Vec<String> = (0..x.ncols()).map(|j| format!("{:e}", x[(i, j)])).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
