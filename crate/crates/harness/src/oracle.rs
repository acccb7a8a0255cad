//! Exhaustive search for planted-shaped vertex sets on micro instances.

use std::collections::VecDeque;

use itertools::Itertools;
use plantedbip::{Error, Graph, Result};

/// Largest `C(n, k)` enumerated by default.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // exact at every step: c * (n - i) is divisible by i + 1
        c = match c.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    c
}

/// Whether `g[set]` is connected, bipartite and `d`-regular.
pub fn has_planted_shape(g: &Graph, set: &[usize], d: usize) -> bool {
    let mut slot = vec![usize::MAX; g.n()];
    for (i, &v) in set.iter().enumerate() {
        slot[v] = i;
    }
    let inside = |v: usize| slot[v] != usize::MAX;
    if set.iter().any(|&v| g.neighbors(v).iter().filter(|&&u| inside(u)).count() != d) {
        return false;
    }
    // BFS two-colouring from the first vertex reaches everything iff connected
    let mut colour = vec![u8::MAX; set.len()];
    let mut queue = VecDeque::from([set[0]]);
    colour[0] = 0;
    let mut seen = 1;
    while let Some(v) = queue.pop_front() {
        let c = colour[slot[v]];
        for &u in g.neighbors(v).iter().filter(|&&u| inside(u)) {
            match colour[slot[u]] {
                u8::MAX => {
                    colour[slot[u]] = 1 - c;
                    seen += 1;
                    queue.push_back(u);
                }
                cu if cu == c => return false,
                _ => {}
            }
        }
    }
    seen == set.len()
}

pub fn brute_force_recover(g: &Graph, k: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    brute_force_recover_with_budget(g, k, d, DEFAULT_BUDGET)
}

/// Every `k`-subset with the planted shape, in lexicographic order.
pub fn brute_force_recover_with_budget(g: &Graph, k: usize, d: usize, budget: u128) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("k = {k} must lie in [1, n = {n}]")));
    }
    let count = binomial(n, k);
    if count > budget {
        return Err(Error::BudgetExceeded { n, k, count, cap: budget });
    }
    Ok((0..n).combinations(k).filter(|s| has_planted_shape(g, s, d)).collect())
}
