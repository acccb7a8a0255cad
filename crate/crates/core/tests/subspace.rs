use plantedbip::graph::{symmetric_eigenvalues, threshold_rank, symmetric_eig};
use plantedbip::instance::{gen_random_planted, gnp, BipartiteTopology, ModelParams};
use plantedbip::seed::trial_rng;
use plantedbip::subspace::{
    bottom_subspace, full_recovery, matching_score, projection_gap, recover_subspace, verify_planted_shape,
    SubspaceParams,
};
use plantedbip::Graph;
use rand::seq::SliceRandom;
use rand::Rng as _;

/// Maximum matching by enumerating edge subsets.
fn brute_matching(g: &Graph) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best = 0;
    for mask in 0u64..(1 << edges.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut used = 0u32;
        let disjoint = edges.iter().enumerate().filter(|(e, _)| mask >> e & 1 == 1).all(|(_, &(u, v))| {
            let bits = (1 << u) | (1 << v);
            let ok = used & bits == 0;
            used |= bits;
            ok
        });
        if disjoint {
            best = size;
        }
    }
    best
}

#[test]
fn matching_scores_match_exhaustive_search() {
    let mut checked = 0;
    for trial in 0..400u64 {
        let mut rng = trial_rng(12, trial);
        let g = gnp(16, rng.random_range(0.2..0.5), &mut rng);
        let v = rng.random_range(0..16);
        let mut others: Vec<usize> = (0..16).filter(|&u| u != v).collect();
        others.shuffle(&mut rng);
        let s_prime = &others[..10];
        let hood: Vec<usize> = g.neighbors(v).iter().copied().filter(|u| s_prime.contains(u)).collect();
        let induced = g.induced_subgraph(&hood).unwrap();
        if hood.len() > 12 || induced.edge_count() > 20 {
            continue;
        }
        checked += 1;
        assert_eq!(matching_score(&g, v, s_prime), brute_matching(&induced), "trial {trial}");
    }
    assert!(checked > 200);
}

#[test]
fn bottom_dimension_relates_to_block_threshold_rank() {
    for seed in 0..10u64 {
        let params = ModelParams::new(100, 40, 20, 0.3).unwrap();
        let inst = gen_random_planted(params, &BipartiteTopology::RandomRegular, seed).unwrap();
        let n_sqrt = 100f64.sqrt();
        for tau_prime in [22.0, 25.0, 28.0] {
            let tau: f64 = (tau_prime - 2.0 * n_sqrt).max(0.0);
            let l_prime = bottom_subspace(&inst.graph, tau_prime).unwrap().dim();
            let block = symmetric_eig(&inst.planted_block()).unwrap();
            let l = threshold_rank(&block, tau);
            assert!(l_prime <= l + 1, "seed {seed} tau' {tau_prime}: {l_prime} > {l} + 1");
        }
    }
}

#[test]
fn noiseless_block_has_zero_gap() {
    let params = ModelParams::new(30, 30, 6, 0.5).unwrap();
    let inst = gen_random_planted(params, &BipartiteTopology::RandomRegular, 3).unwrap();
    for tau_prime in [1.0, 3.0, 6.0] {
        let basis = bottom_subspace(&inst.graph, tau_prime).unwrap();
        assert!(projection_gap(&inst.signed_indicator(), &basis) < 1e-10);
    }
}

#[test]
fn swapped_candidates_are_repaired() {
    // δk = 1.6 here, so one planted vertex is swapped for an outside one
    let (n, k, d, p) = (100, 40, 10, 0.8);
    let delta = p * p / 16.0;
    let swaps = (delta * k as f64).floor() as usize;
    assert_eq!(swaps, 1);
    let mut good = 0;
    for seed in 0..20u64 {
        let inst = gen_random_planted(ModelParams::new(n, k, d, p).unwrap(), &BipartiteTopology::RandomRegular, seed).unwrap();
        let mut rng = trial_rng(99, seed);
        let mut s_prime = inst.planted_set();
        let mut outside = inst.outside();
        s_prime.shuffle(&mut rng);
        outside.shuffle(&mut rng);
        s_prime[..swaps].copy_from_slice(&outside[..swaps]);
        if full_recovery(&inst.graph, k, &s_prime, p, delta).unwrap() == Ok(inst.planted_set()) {
            good += 1;
        }
    }
    assert!(good >= 18, "{good}/20");
}

#[test]
fn one_swap_breaks_the_shape() {
    let mut rejected = 0;
    for seed in 0..20u64 {
        let params = ModelParams::new(150, 60, 30, 0.3).unwrap();
        let inst = gen_random_planted(params, &BipartiteTopology::CompleteBalanced, seed).unwrap();
        let mut s = inst.planted_set();
        s[0] = inst.outside()[0];
        rejected += verify_planted_shape(&inst.graph, &s, 30).is_none() as usize;
    }
    assert_eq!(rejected, 20);
}

#[test]
fn recovered_sets_always_pass_the_shape_check() {
    for seed in 0..10u64 {
        let params = ModelParams::new(80, 32, 16, 0.4).unwrap();
        let inst = gen_random_planted(params, &BipartiteTopology::CompleteBalanced, seed).unwrap();
        let sp = SubspaceParams::defaults(80, 32, 16, 0.4);
        let report = recover_subspace(&inst.graph, 32, 0.4, 16, &sp).unwrap();
        if let Some(r) = report.recovered {
            let shape = verify_planted_shape(&inst.graph, &r.set, 16).unwrap();
            assert_eq!(shape, r.bipartition);
            assert_eq!(r.set.len(), 32);
        }
        let ev = symmetric_eigenvalues(&inst.graph.adjacency_matrix()).unwrap();
        assert_eq!(report.dim, ev.iter().filter(|&&l| l <= -8.0 + 1e-9 * ev[ev.len() - 1].abs().max(1.0)).count());
    }
}
