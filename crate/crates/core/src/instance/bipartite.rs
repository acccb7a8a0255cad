use rand::seq::SliceRandom;

use super::BipartiteTopology;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::Rng;

const RESAMPLE_CAP: usize = 1000;

/// Connected `d`-regular bipartite graph on `k` vertices.
///
/// Sides are `0..k/2` and `k/2..k`.
pub fn gen_regular_bipartite(k: usize, d: usize, topo: &BipartiteTopology, rng: &mut Rng) -> Result<Graph> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("k = {k} must be positive and even")));
    }
    let h = k / 2;
    if d == 0 || d > h {
        return Err(Error::Infeasible(format!("d = {d} outside [1, k/2 = {h}]")));
    }
    if d == 1 && k > 2 {
        return Err(Error::Infeasible(format!(
            "a 1-regular bipartite graph on {k} vertices is a perfect matching and cannot be connected"
        )));
    }
    match topo {
        BipartiteTopology::CompleteBalanced => {
            if d != h {
                return Err(Error::Infeasible(format!("complete balanced block needs d = k/2 = {h}, got {d}")));
            }
            Graph::from_edges(k, (0..h).flat_map(|i| (h..k).map(move |j| (i, j))))
        }
        BipartiteTopology::Circulant(offsets) => {
            let offsets: Vec<usize> = if offsets.is_empty() { (0..d).collect() } else { offsets.clone() };
            let mut reduced: Vec<usize> = offsets.iter().map(|o| o % h).collect();
            reduced.sort_unstable();
            reduced.dedup();
            if offsets.len() != d || reduced.len() != d {
                return Err(Error::InvalidParams(format!(
                    "circulant needs {d} offsets distinct mod {h}, got {offsets:?}"
                )));
            }
            let g = Graph::from_edges(k, (0..h).flat_map(|i| reduced.iter().map(move |&o| (i, h + (i + o) % h))))?;
            if !g.is_connected() {
                return Err(Error::Infeasible(format!("circulant offsets {offsets:?} give a disconnected block")));
            }
            Ok(g)
        }
        BipartiteTopology::RandomRegular => {
            for _ in 0..RESAMPLE_CAP {
                let g = random_regular(h, d, rng)?;
                if g.is_connected() {
                    return Ok(g);
                }
            }
            Err(Error::ResampleCap(RESAMPLE_CAP))
        }
    }
}

/// Union of `d` edge-disjoint perfect matchings, each drawn at random from the
/// complement of the matchings chosen so far.
fn random_regular(h: usize, d: usize, rng: &mut Rng) -> Result<Graph> {
    let mut used = vec![vec![false; h]; h];
    let mut g = Graph::new(2 * h);
    for _ in 0..d {
        let mate = random_perfect_matching(&used, rng);
        for (i, &j) in mate.iter().enumerate() {
            used[i][j] = true;
            g.add_edge(i, h + j)?;
        }
    }
    Ok(g)
}

/// Perfect matching avoiding `used`, found by Kuhn's algorithm with shuffled
/// visiting orders. The allowed graph is regular bipartite, so one always exists.
fn random_perfect_matching(used: &[Vec<bool>], rng: &mut Rng) -> Vec<usize> {
    let h = used.len();
    let mut adj: Vec<Vec<usize>> = used
        .iter()
        .map(|row| (0..h).filter(|&j| !row[j]).collect())
        .collect();
    for list in &mut adj {
        list.shuffle(rng);
    }
    let mut order: Vec<usize> = (0..h).collect();
    order.shuffle(rng);

    let mut left_of = vec![usize::MAX; h];
    let mut right_of = vec![usize::MAX; h];
    // greedy pass settles most vertices cheaply
    for &i in &order {
        if let Some(&j) = adj[i].iter().find(|&&j| left_of[j] == usize::MAX) {
            left_of[j] = i;
            right_of[i] = j;
        }
    }
    let mut seen = vec![false; h];
    for &i in &order {
        if right_of[i] != usize::MAX {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        let found = augment(i, &adj, &mut left_of, &mut right_of, &mut seen);
        debug_assert!(found, "regular bipartite graph must have a perfect matching");
    }
    right_of
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    left_of: &mut [usize],
    right_of: &mut [usize],
    seen: &mut [bool],
) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if left_of[j] == usize::MAX || augment(left_of[j], adj, left_of, right_of, seen) {
            left_of[j] = i;
            right_of[i] = j;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    /// Independent structural check: BFS 2-colouring, degrees, reachability.
    fn regular_bipartite_connected(g: &Graph, d: usize) -> bool {
        let n = g.n();
        let mut colour = vec![-1i32; n];
        colour[0] = 0;
        let mut q = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(v) = q.pop_front() {
            for w in 0..n {
                if !g.has_edge(v, w) {
                    continue;
                }
                if colour[w] == -1 {
                    colour[w] = 1 - colour[v];
                    reached += 1;
                    q.push_back(w);
                } else if colour[w] == colour[v] {
                    return false;
                }
            }
        }
        let degrees_ok = (0..n).all(|v| (0..n).filter(|&w| g.has_edge(v, w)).count() == d);
        let balanced = colour.iter().filter(|&&c| c == 0).count() == n / 2;
        reached == n && degrees_ok && balanced
    }

    #[test]
    fn complete_balanced_k4_is_four_cycle() {
        let g = gen_regular_bipartite(4, 2, &BipartiteTopology::CompleteBalanced, &mut rng_from_seed(0)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn one_regular_is_infeasible() {
        for topo in [BipartiteTopology::RandomRegular, BipartiteTopology::Circulant(vec![])] {
            assert!(matches!(
                gen_regular_bipartite(8, 1, &topo, &mut rng_from_seed(0)),
                Err(Error::Infeasible(_))
            ));
        }
        assert!(gen_regular_bipartite(2, 1, &BipartiteTopology::RandomRegular, &mut rng_from_seed(0)).is_ok());
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut rng = rng_from_seed(1);
        assert!(gen_regular_bipartite(8, 5, &BipartiteTopology::RandomRegular, &mut rng).is_err());
        assert!(gen_regular_bipartite(8, 3, &BipartiteTopology::CompleteBalanced, &mut rng).is_err());
        assert!(gen_regular_bipartite(8, 2, &BipartiteTopology::Circulant(vec![0, 4]), &mut rng).is_err());
        assert!(gen_regular_bipartite(7, 2, &BipartiteTopology::RandomRegular, &mut rng).is_err());
    }

    #[test]
    fn random_regular_k20_d4() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let g = gen_regular_bipartite(20, 4, &BipartiteTopology::RandomRegular, &mut rng).unwrap();
            assert!(regular_bipartite_connected(&g, 4));
        }
    }

    #[test]
    fn dense_random_block_is_feasible() {
        let g = gen_regular_bipartite(60, 29, &BipartiteTopology::RandomRegular, &mut rng_from_seed(4)).unwrap();
        assert!(regular_bipartite_connected(&g, 29));
    }

    #[test]
    fn same_seed_same_block() {
        let a = gen_regular_bipartite(30, 5, &BipartiteTopology::RandomRegular, &mut rng_from_seed(9)).unwrap();
        let b = gen_regular_bipartite(30, 5, &BipartiteTopology::RandomRegular, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn generated_blocks_are_valid(half in 2usize..16, d_raw in 2usize..16, seed in any::<u64>(), which in 0u8..3) {
            let d = 2 + d_raw % (half - 1);
            let topo = match which {
                0 => BipartiteTopology::RandomRegular,
                1 => BipartiteTopology::Circulant(vec![]),
                _ => BipartiteTopology::CompleteBalanced,
            };
            let d = if which == 2 { half } else { d };
            let g = gen_regular_bipartite(2 * half, d, &topo, &mut rng_from_seed(seed)).unwrap();
            prop_assert!(regular_bipartite_connected(&g, d));
            prop_assert_eq!(g.edge_count(), half * d);
        }
    }
}
