use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{matching_size, Graph};

/// Size of a maximum matching of the graph induced on `N(v) ∩ s_prime`.
pub fn matching_score(g: &Graph, v: usize, s_prime: &[usize]) -> usize {
    let mut inside = vec![false; g.n()];
    for &u in s_prime {
        inside[u] = true;
    }
    score_with(g, v, &inside)
}

fn score_with(g: &Graph, v: usize, inside: &[bool]) -> usize {
    let hood: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| inside[u]).collect();
    // an edgeless neighbourhood is the common case for planted vertices
    if hood.iter().all(|&u| g.neighbors(u).iter().all(|&w| !inside[w] || !g.has_edge(v, w))) {
        return 0;
    }
    matching_size(&g.induced_subgraph(&hood).expect("neighbourhood vertices are in range"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecoveryFailure {
    /// `{v : score <= δk}` does not have exactly `k` vertices.
    WrongSize { found: usize, histogram: BTreeMap<usize, usize> },
    /// Some vertices score strictly inside `(δk, (p²/4 - δ)k)`.
    Ambiguous { vertices: Vec<usize>, histogram: BTreeMap<usize, usize> },
    /// A set was classified but is not a connected `d`-regular bipartite subgraph.
    ShapeRejected { set: Vec<usize> },
}

/// Keep the vertices whose neighbourhood inside `s_prime` has a small matching.
pub fn full_recovery(
    g: &Graph,
    k: usize,
    s_prime: &[usize],
    p: f64,
    delta: f64,
) -> Result<std::result::Result<Vec<usize>, RecoveryFailure>> {
    if !(delta > 0.0 && delta < 1.0 && delta <= p * p / 16.0 && p * p / 4.0 > 2.0 * delta) {
        return Err(Error::InvalidParams(format!(
            "delta = {delta} must lie in (0, p²/16] with p = {p}"
        )));
    }
    let mut inside = vec![false; g.n()];
    for &u in s_prime {
        if u >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
        }
        inside[u] = true;
    }
    let scores: Vec<usize> = (0..g.n()).into_par_iter().map(|v| score_with(g, v, &inside)).collect();
    let mut histogram = BTreeMap::new();
    for &s in &scores {
        *histogram.entry(s).or_insert(0) += 1;
    }
    let (low, high) = (delta * k as f64, (p * p / 4.0 - delta) * k as f64);
    let ambiguous: Vec<usize> = (0..g.n())
        .filter(|&v| scores[v] as f64 > low && (scores[v] as f64) < high)
        .collect();
    if !ambiguous.is_empty() {
        return Ok(Err(RecoveryFailure::Ambiguous { vertices: ambiguous, histogram }));
    }
    let set: Vec<usize> = (0..g.n()).filter(|&v| scores[v] as f64 <= low).collect();
    if set.len() != k {
        return Ok(Err(RecoveryFailure::WrongSize { found: set.len(), histogram }));
    }
    Ok(Ok(set))
}

/// The bipartition of `s` when its induced subgraph is connected, bipartite and
/// `d`-regular. The side holding the smallest vertex comes first.
pub fn verify_planted_shape(g: &Graph, s: &[usize], d: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if s.is_empty() {
        return None;
    }
    let mut colour = vec![u8::MAX; g.n()];
    let mut inside = vec![false; g.n()];
    for &v in s {
        if v >= g.n() {
            return None;
        }
        inside[v] = true;
    }
    for &v in s {
        if g.neighbors(v).iter().filter(|&&u| inside[u]).count() != d {
            return None;
        }
    }
    let start = *s.iter().min().unwrap();
    colour[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v).iter().filter(|&&u| inside[u]) {
            if colour[u] == u8::MAX {
                colour[u] = 1 - colour[v];
                reached += 1;
                queue.push_back(u);
            } else if colour[u] == colour[v] {
                return None;
            }
        }
    }
    let mut set = s.to_vec();
    set.sort_unstable();
    set.dedup();
    if reached != set.len() {
        return None;
    }
    let (a, b): (Vec<usize>, Vec<usize>) = set.iter().partition(|&&v| colour[v] == 0);
    Some((a, b))
}
