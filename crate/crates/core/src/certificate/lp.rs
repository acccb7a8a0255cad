//! Feasibility of `W x = b, 0 <= x <= t` with a theorem-of-alternatives witness.
//!
//! The box is put in standard form with slacks `x + s = t`, so the system is
//! `[W 0; I I] [x; s] = [b; t 1]` with `x, s >= 0`. Phase one of the simplex
//! method (Bland's rule, dense tableau) adds artificials on the `W` rows only.
//! On infeasibility the phase-one duals `π` give `y = -D π_W`, `z = -π_box`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;

/// Witness `(y, z >= 0)` with `Wᵀ y + z >= 0` and `bᵀ y + t ⟨z, 1⟩ < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl FarkasCertificate {
    /// `min_i (Wᵀy + z)_i` (`+inf` for no columns) and `bᵀy + t Σ z`.
    pub fn evaluate(&self, w: &DMatrix<f64>, b: &DVector<f64>, t: f64) -> (f64, f64) {
        let y = DVector::from_column_slice(&self.y);
        let wty = w.transpose() * &y;
        let slack = (0..wty.len()).map(|i| wty[i] + self.z[i]).fold(f64::INFINITY, f64::min);
        let value = b.dot(&y) + t * self.z.iter().sum::<f64>();
        (slack, value)
    }

    /// Substitution check at tolerance `tol`.
    pub fn verify(&self, w: &DMatrix<f64>, b: &DVector<f64>, t: f64, tol: f64) -> bool {
        let (slack, value) = self.evaluate(w, b, t);
        self.z.len() == w.ncols() && self.z.iter().all(|&z| z >= 0.0) && slack >= -tol && value <= -tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Feasible(DVector<f64>),
    Infeasible(FarkasCertificate),
}

/// Residual tolerance for a feasible point: `1e-8 max(1, ‖b‖_∞)`.
pub fn feasibility_tolerance(b: &DVector<f64>) -> f64 {
    1e-8 * b.amax().max(1.0)
}

pub fn solve_bounded_lp(w: &DMatrix<f64>, b: &DVector<f64>, t: f64) -> Result<LpOutcome> {
    let (l, m) = (w.nrows(), w.ncols());
    if b.len() != l {
        return Err(Error::InvalidParams(format!("rhs has length {}, expected {l}", b.len())));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("box bound t = {t} must be positive")));
    }
    let tol = feasibility_tolerance(b);
    if l == 0 || b.amax() == 0.0 {
        return Ok(LpOutcome::Feasible(DVector::zeros(m)));
    }
    if m == 0 {
        let y: Vec<f64> = b.iter().map(|&v| -v / b.amax()).collect();
        return Ok(LpOutcome::Infeasible(FarkasCertificate { y, z: Vec::new() }));
    }

    let sign: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let rows = l + m;
    let cols = 2 * m + l;
    // original constraint matrix and rhs, W rows sign-flipped so the rhs is non-negative
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs = DVector::<f64>::zeros(rows);
    for r in 0..l {
        for i in 0..m {
            a[(r, i)] = sign[r] * w[(r, i)];
        }
        a[(r, 2 * m + r)] = 1.0;
        rhs[r] = sign[r] * b[r];
    }
    for i in 0..m {
        a[(l + i, i)] = 1.0;
        a[(l + i, m + i)] = 1.0;
        rhs[l + i] = t;
    }
    let cost: Vec<f64> = (0..cols).map(|j| if j >= 2 * m { 1.0 } else { 0.0 }).collect();
    let mut basis: Vec<usize> = (0..l).map(|r| 2 * m + r).chain((0..m).map(|i| m + i)).collect();

    let phase_one = run_simplex(&a, &rhs, &cost, &mut basis)?;

    let basis_matrix = a.select_columns(basis.iter());
    let lu = basis_matrix.clone().lu();

    if phase_one <= tol {
        let x_b = lu
            .solve(&rhs)
            .ok_or_else(|| Error::LpNumerical("singular final basis".into()))?;
        let mut x = DVector::<f64>::zeros(m);
        for (pos, &var) in basis.iter().enumerate() {
            if var < m {
                x[var] = x_b[pos].clamp(0.0, t);
            }
        }
        if (w * &x - b).amax() <= tol {
            return Ok(LpOutcome::Feasible(x));
        }
    } else {
        let c_b = DVector::from_iterator(rows, basis.iter().map(|&j| cost[j]));
        let pi = basis_matrix
            .transpose()
            .lu()
            .solve(&c_b)
            .ok_or_else(|| Error::LpNumerical("singular final basis".into()))?;
        let cert = canonical_certificate(w, (0..l).map(|r| -sign[r] * pi[r]).collect());
        if cert.verify(w, b, t, tol) {
            return Ok(LpOutcome::Infeasible(cert));
        }
    }
    Err(Error::LpNumerical(format!("phase-one value {phase_one:e} could not be certified either way")))
}

/// Like [`solve_bounded_lp`], but a feasible answer has (up to `rel_gap`) the
/// smallest possible largest entry, found by bisecting the cap.
pub fn solve_min_cap_lp(w: &DMatrix<f64>, b: &DVector<f64>, t: f64, rel_gap: f64) -> Result<LpOutcome> {
    let mut best = match solve_bounded_lp(w, b, t)? {
        LpOutcome::Feasible(x) => x,
        infeasible => return Ok(infeasible),
    };
    // near the optimal cap phase one may stop with tiny artificials left over
    let exact = 1e-12 * b.amax().max(1.0);
    let (mut lo, mut hi) = (0.0, best.max().max(0.0));
    while hi > exact && hi - lo > rel_gap * hi {
        let mid = 0.5 * (lo + hi);
        match solve_bounded_lp(w, b, mid)? {
            LpOutcome::Feasible(x) if (w * &x - b).amax() <= exact => {
                hi = x.max().max(0.0).min(mid);
                best = x;
            }
            _ => lo = mid,
        }
    }
    Ok(LpOutcome::Feasible(best))
}

/// Smallest admissible `z` for a given `y`, scaled so that `‖y‖_∞ = 1`.
fn canonical_certificate(w: &DMatrix<f64>, y: Vec<f64>) -> FarkasCertificate {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let y: Vec<f64> = if scale > 0.0 { y.iter().map(|v| v / scale).collect() } else { y };
    let wty = w.transpose() * DVector::from_column_slice(&y);
    let z = wty.iter().map(|&v| (-v).max(0.0)).collect();
    FarkasCertificate { y, z }
}

/// Minimise `costᵀ v` from the feasible basis `basis`; returns the optimum.
fn run_simplex(a: &DMatrix<f64>, rhs: &DVector<f64>, cost: &[f64], basis: &mut [usize]) -> Result<f64> {
    let (rows, cols) = a.shape();
    // tableau [B⁻¹A | B⁻¹rhs]; the starting basis columns are unit vectors
    let mut tab = DMatrix::<f64>::zeros(rows, cols + 1);
    tab.columns_mut(0, cols).copy_from(a);
    tab.column_mut(cols).copy_from(rhs);
    let max_pivots = 50 * (rows + cols) + 1000;

    for _ in 0..max_pivots {
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let rc = cost[j] - (0..rows).map(|r| cost[basis[r]] * tab[(r, j)]).sum::<f64>();
            rc < -PIVOT_EPS
        });
        let Some(j) = entering else {
            return Ok((0..rows).map(|r| cost[basis[r]] * tab[(r, cols)]).sum());
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let coef = tab[(r, j)];
            if coef > PIVOT_EPS {
                let ratio = tab[(r, cols)].max(0.0) / coef;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, br)) => {
                        if ratio < br - 1e-14 || (ratio <= br + 1e-14 && basis[r] < basis[best]) {
                            Some((r, ratio))
                        } else {
                            Some((best, br))
                        }
                    }
                };
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot row
        let (r, _) = leave.ok_or_else(|| Error::LpNumerical("unbounded phase-one direction".into()))?;
        pivot(&mut tab, r, j);
        basis[r] = j;
    }
    Err(Error::LpNumerical("simplex pivot limit reached".into()))
}

fn pivot(tab: &mut DMatrix<f64>, r: usize, j: usize) {
    let p = tab[(r, j)];
    let mut row = tab.row(r).into_owned();
    row /= p;
    for i in 0..tab.nrows() {
        if i == r {
            continue;
        }
        let f = tab[(i, j)];
        if f != 0.0 {
            for c in 0..tab.ncols() {
                tab[(i, c)] -= f * row[c];
            }
            tab[(i, j)] = 0.0;
        }
    }
    tab.row_mut(r).copy_from(&row);
}
