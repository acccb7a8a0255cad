use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{gen_regular_bipartite, BipartiteTopology, ModelParams, PlantedInstance};
use crate::error::{Error, Result};
use crate::graph::{complement, min_eigenvalue, Graph};
use crate::seed::{rng_from_seed, Rng};

/// Erdős–Rényi `G(n, p)`; pairs are visited in lexicographic order.
pub fn gnp(n: usize, p: f64, rng: &mut Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).expect("fresh pair");
            }
        }
    }
    g
}

/// Random planted instance with `S` placed uniformly at random.
pub fn gen_random_planted(params: ModelParams, topo: &BipartiteTopology, seed: u64) -> Result<PlantedInstance> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    let placement = random_placement(params.n, params.k, &mut rng);
    build(params, topo, &placement, None, seed, &mut rng)
}

/// Random planted instance with block vertex `i` placed at `placement[i]`;
/// the first `k/2` entries form `S1`.
pub fn gen_random_planted_at(
    params: ModelParams,
    topo: &BipartiteTopology,
    placement: &[usize],
    seed: u64,
) -> Result<PlantedInstance> {
    params.validate()?;
    check_placement(params, placement)?;
    let mut rng = rng_from_seed(seed);
    build(params, topo, placement, None, seed, &mut rng)
}

/// Semi-random instance: Bernoulli cross edges, caller-chosen `V \ S` block.
///
/// `outside` lives on `n - k` vertices, mapped in order onto `V \ S` ascending.
pub fn gen_semi_random(
    params: ModelParams,
    topo: &BipartiteTopology,
    outside: &Graph,
    seed: u64,
) -> Result<PlantedInstance> {
    params.validate()?;
    if outside.n() != params.n - params.k {
        return Err(Error::InvalidParams(format!(
            "outside graph has {} vertices, expected n - k = {}",
            outside.n(),
            params.n - params.k
        )));
    }
    let mut rng = rng_from_seed(seed);
    let placement = random_placement(params.n, params.k, &mut rng);
    let inst = build(params, topo, &placement, Some(outside), seed, &mut rng)?;
    let check = check_semirandom_condition(&inst.graph, &inst.planted_set(), params.p, params.d, params.alpha)?;
    if !check.passes {
        return Err(Error::ConditionViolated {
            witness: check.witness,
            threshold: check.threshold,
        });
    }
    Ok(inst)
}

fn random_placement(n: usize, k: usize, rng: &mut Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm.truncate(k);
    perm
}

fn check_placement(params: ModelParams, placement: &[usize]) -> Result<()> {
    let mut sorted = placement.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if placement.len() != params.k || sorted.len() != params.k || sorted.last().is_some_and(|&v| v >= params.n) {
        return Err(Error::InvalidParams(format!(
            "placement must list {} distinct vertices below {}",
            params.k, params.n
        )));
    }
    Ok(())
}

fn build(
    params: ModelParams,
    topo: &BipartiteTopology,
    placement: &[usize],
    outside: Option<&Graph>,
    seed: u64,
    rng: &mut Rng,
) -> Result<PlantedInstance> {
    let (n, k) = (params.n, params.k);
    let block = gen_regular_bipartite(k, params.d, topo, rng)?;
    let mut g = Graph::new(n);
    for (a, b) in block.edges() {
        g.add_edge(placement[a], placement[b])?;
    }
    let mut in_s = vec![false; n];
    for &v in placement {
        in_s[v] = true;
    }
    let rest = complement(n, &{
        let mut s = placement.to_vec();
        s.sort_unstable();
        s
    });
    let mut rest_index = vec![usize::MAX; n];
    for (i, &v) in rest.iter().enumerate() {
        rest_index[v] = i;
    }
    for u in 0..n {
        for v in u + 1..n {
            let edge = match (in_s[u], in_s[v]) {
                (true, true) => continue,
                (false, false) => match outside {
                    Some(h) => h.has_edge(rest_index[u], rest_index[v]),
                    None => rng.random_bool(params.p),
                },
                _ => rng.random_bool(params.p),
            };
            if edge {
                g.add_edge(u, v)?;
            }
        }
    }
    let mut s1 = placement[..k / 2].to_vec();
    let mut s2 = placement[k / 2..].to_vec();
    s1.sort_unstable();
    s2.sort_unstable();
    Ok(PlantedInstance {
        graph: g,
        s1,
        s2,
        params,
        seed,
        adversary_edges: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiRandomCheck {
    /// `λ_min(A|_{V\S} - p 11ᵀ)`, `+inf` when `V \ S` is empty.
    pub witness: f64,
    /// `-((1/2 - alpha) / (1/2 + alpha)) d`.
    pub threshold: f64,
    pub passes: bool,
}

/// Eigenvalue condition on the block outside the planted set `s`.
pub fn check_semirandom_condition(g: &Graph, s: &[usize], p: f64, d: usize, alpha: f64) -> Result<SemiRandomCheck> {
    let threshold = -((0.5 - alpha) / (0.5 + alpha)) * d as f64;
    let rest = complement(g.n(), s);
    let witness = if rest.is_empty() {
        f64::INFINITY
    } else {
        let m = g.induced_adjacency(&rest).add_scalar(-p);
        min_eigenvalue(&m)?
    };
    Ok(SemiRandomCheck {
        witness,
        threshold,
        passes: witness > threshold,
    })
}

/// `R = A - E[A]` under the random model: the planted block is deterministic,
/// every other off-diagonal pair has mean `p`.
pub fn perturbation_matrix(inst: &PlantedInstance) -> Result<DMatrix<f64>> {
    if !inst.adversary_edges.is_empty() {
        return Err(Error::AdversaryModified);
    }
    let n = inst.n();
    let in_s = inst.membership();
    let a = inst.graph.adjacency_matrix();
    let p = inst.params.p;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j || (in_s[i] && in_s[j]) {
            0.0
        } else {
            a[(i, j)] - p
        }
    }))
}
