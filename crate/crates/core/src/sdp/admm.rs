use nalgebra::{DMatrix, SymmetricEigen};

use super::{check_feasibility, sdp_objective, GramSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// ADMM on the split `X ∈ PSD`, `Z ∈ P`, `X = Z`, with scaled dual `U`.
///
/// `P` is the polytope of unit-trace matrices with diagonal at most `1/k` and
/// non-positive edge entries; its projection is closed form.
pub fn solve_primal_sdp(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<GramSolution> {
    let n = g.n();
    if k < 2 || n == 0 || k > n {
        return Err(Error::InvalidParams(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    if !(cfg.abs_tol > 0.0 && cfg.rho > 0.0 && (1.0..2.0).contains(&cfg.relaxation)) {
        return Err(Error::InvalidParams("solver tolerances, rho and relaxation must be positive".into()));
    }
    let a = g.adjacency_matrix();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let cap = 1.0 / k as f64;
    let alpha = cfg.relaxation;

    let mut rho = cfg.rho;
    let mut z = DMatrix::<f64>::identity(n, n) / n as f64;
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut x = z.clone();
    let (mut r, mut s) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iterations {
        iterations += 1;
        x = project_psd(&z - &u - &a / rho)?;
        let x_hat = &x * alpha + &z * (1.0 - alpha);
        let mut z_new = &x_hat + &u;
        project_polytope(&mut z_new, &edges, cap);
        u += &x_hat - &z_new;
        r = (&x - &z_new).norm();
        s = rho * (&z_new - &z).norm();
        z = z_new;

        if r <= cfg.abs_tol && s <= cfg.abs_tol {
            // rescaling a PSD iterate fixes the trace without leaving the cone
            let t = x.trace();
            if t > 0.0 {
                x /= t;
            }
            if check_feasibility(&x, g, k)?.within(cfg.abs_tol) {
                converged = true;
                break;
            }
        }
        if cfg.adaptive_rho && iterations % 20 == 0 {
            if r > 10.0 * s {
                rho *= 2.0;
                u /= 2.0;
            } else if s > 10.0 * r {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }

    let residuals = check_feasibility(&x, g, k)?;
    Ok(GramSolution {
        objective: sdp_objective(&x, g),
        x,
        residuals,
        primal_residual: r,
        dual_residual: s,
        iterations,
        converged,
    })
}

/// Nearest PSD matrix in Frobenius norm.
pub(crate) fn project_psd(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 1000 * n.max(30)).ok_or(Error::EigenNoConvergence)?;
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    let q = eig.eigenvectors.select_columns(keep.iter());
    let mut scaled = q.clone();
    for (c, &i) in keep.iter().enumerate() {
        scaled.column_mut(c).scale_mut(eig.eigenvalues[i]);
    }
    Ok(scaled * q.transpose())
}

/// Projection onto `P`: clamp edge entries at zero, and move the diagonal to
/// the capped simplex `{Σ z = 1, z <= cap}`.
fn project_polytope(m: &mut DMatrix<f64>, edges: &[(usize, usize)], cap: f64) {
    let n = m.nrows();
    for &(i, j) in edges {
        let v = 0.5 * (m[(i, j)] + m[(j, i)]);
        let v = v.min(0.0);
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    for (i, z) in capped_simplex(&diag, cap).into_iter().enumerate() {
        m[(i, i)] = z;
    }
    // off-diagonal non-edge entries are unconstrained apart from symmetry
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Euclidean projection of `y` onto `{z : Σ z = 1, z_i <= cap}`.
///
/// The solution is `z_i = min(y_i - μ, cap)`; the capped entries are the
/// largest ones, so scanning the sorted order finds `μ` exactly.
pub(crate) fn capped_simplex(y: &[f64], cap: f64) -> Vec<f64> {
    let n = y.len();
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut tail: f64 = sorted.iter().sum();
    let mut mu = (tail - 1.0) / n as f64;
    for m in 0..n {
        // top m entries capped, the rest shifted by mu
        mu = (m as f64 * cap + tail - 1.0) / (n - m) as f64;
        let capped_ok = m == 0 || sorted[m - 1] - mu >= cap;
        let free_ok = sorted[m] - mu < cap;
        if capped_ok && free_ok {
            break;
        }
        tail -= sorted[m];
    }
    y.iter().map(|&v| (v - mu).min(cap)).collect()
}
