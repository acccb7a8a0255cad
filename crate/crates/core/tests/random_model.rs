//! Finite-size calibration of the random-model spectral bounds.

use plantedbip::graph::{min_eigenvalue, spectral_norm, symmetric_eigenvalues};
use plantedbip::instance::{
    check_semirandom_condition, gen_random_planted, gnp, perturbation_matrix, BipartiteTopology, ModelParams,
};
use plantedbip::seed::trial_rng;

#[test]
fn perturbation_norm_at_n400() {
    let n = 400;
    let params = ModelParams::new(n, 40, 10, 0.5).unwrap();
    let within = (0..100u64)
        .filter(|&seed| {
            let inst = gen_random_planted(params, &BipartiteTopology::RandomRegular, seed).unwrap();
            let r = perturbation_matrix(&inst).unwrap();
            spectral_norm(&r).unwrap() <= 2.1 * (n as f64).sqrt()
        })
        .count();
    assert!(within >= 95, "{within}/100");
}

#[test]
fn gnp_outside_block_witness() {
    let m = 300;
    let within = (0..100u64)
        .filter(|&seed| {
            let g = gnp(m, 0.5, &mut trial_rng(77, seed));
            let check = check_semirandom_condition(&g, &[], 0.5, 1, 1.0 / 6.0).unwrap();
            check.witness >= -2.1 * (m as f64).sqrt()
        })
        .count();
    assert!(within >= 95, "{within}/100");
}

#[test]
fn empty_outside_graph_has_rank_one_witness() {
    // λ_min(-p 11ᵀ) on m vertices is -pm
    let g = plantedbip::Graph::new(12);
    let check = check_semirandom_condition(&g, &[], 0.25, 8, 1.0 / 6.0).unwrap();
    assert!((check.witness + 3.0).abs() < 1e-12);
    assert_eq!(check.passes, 3.0 < 0.5 * 8.0);
}

#[test]
fn planted_block_spectrum() {
    for seed in 0..20u64 {
        let params = ModelParams::new(60, 24, 5, 0.4).unwrap();
        let inst = gen_random_planted(params, &BipartiteTopology::RandomRegular, seed).unwrap();
        let block = inst.planted_block();
        let ev = symmetric_eigenvalues(&block).unwrap();
        assert!((ev[0] + 5.0).abs() < 1e-9);
        assert!((ev[ev.len() - 1] - 5.0).abs() < 1e-9);
        let u = inst.signed_indicator();
        let a = inst.graph.adjacency_matrix();
        assert!(((u.transpose() * &a * &u)[(0, 0)] + 5.0 * 24.0).abs() < 1e-9);
        assert!((min_eigenvalue(&block).unwrap() + 5.0).abs() < 1e-9);
    }
}
