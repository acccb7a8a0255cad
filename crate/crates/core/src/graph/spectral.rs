use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
///
/// Column `i` of `eigenvectors` belongs to `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct SymmetricSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(l);
        }
        scaled * self.eigenvectors.transpose()
    }
}

fn check_square(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(())
}

/// Verify symmetry within `1e-9 * max(1, max|m|)` and return the averaged matrix.
pub(crate) fn symmetrized(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square(m)?;
    let scale = m.amax().max(1.0);
    let mut asym: f64 = 0.0;
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > 1e-9 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok((m + m.transpose()) * 0.5)
}

fn decompose(m: DMatrix<f64>) -> Result<SymmetricSpectrum> {
    let n = m.nrows();
    if n == 0 {
        return Ok(SymmetricSpectrum {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1000 * n.max(30))
        .ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(order.iter());
    Ok(SymmetricSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Full eigendecomposition of a symmetric matrix.
pub fn symmetric_eig(m: &DMatrix<f64>) -> Result<SymmetricSpectrum> {
    decompose(symmetrized(m)?)
}

/// Ascending eigenvalues only.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let m = symmetrized(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Number of eigenvalues `<= -tau`.
pub fn threshold_rank(s: &SymmetricSpectrum, tau: f64) -> usize {
    s.eigenvalues.iter().take_while(|&&l| l <= -tau).count()
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(symmetric_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// Operator 2-norm of a symmetric matrix, `max |λ|`.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    let v = symmetric_eigenvalues(m)?;
    Ok(v.iter().fold(0.0f64, |acc, l| acc.max(l.abs())))
}

fn check_indices(n: usize, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::VertexOutOfRange { vertex: i, n }),
        None => Ok(()),
    }
}

fn ascending(idx: &[usize]) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `|rows| x |cols|` block of `m`, both sets taken in ascending order.
pub fn restricted_submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Result<DMatrix<f64>> {
    check_indices(m.nrows(), rows)?;
    check_indices(m.ncols(), cols)?;
    let (r, c) = (ascending(rows), ascending(cols));
    Ok(DMatrix::from_fn(r.len(), c.len(), |a, b| m[(r[a], c[b])]))
}

/// Same shape as `m`, keeping entries on `rows x cols` and zeroing the rest.
pub fn padded_submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Result<DMatrix<f64>> {
    check_indices(m.nrows(), rows)?;
    check_indices(m.ncols(), cols)?;
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for &i in rows {
        for &j in cols {
            out[(i, j)] = m[(i, j)];
        }
    }
    Ok(out)
}
