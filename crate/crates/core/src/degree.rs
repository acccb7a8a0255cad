//! Bottom-k degree sorting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecovery {
    /// The `k` lowest-degree vertices, ascending.
    pub set: Vec<usize>,
    /// The `k`-th and `(k+1)`-th smallest degrees coincide.
    pub ambiguous: bool,
}

/// Return the `k` vertices of smallest degree, ties broken by vertex index.
pub fn recover_by_degree(g: &Graph, k: usize) -> Result<DegreeRecovery> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("k = {k} must lie in [1, n = {n}]")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let ambiguous = k < n && g.degree(order[k - 1]) == g.degree(order[k]);
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    Ok(DegreeRecovery { set, ambiguous })
}

/// Whether `d <= 2pk/3`, the regime where degree sorting is expected to work.
pub fn in_degree_regime(k: usize, d: usize, p: f64) -> bool {
    d as f64 <= 2.0 * p * k as f64 / 3.0
}
