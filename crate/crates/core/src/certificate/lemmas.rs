use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{SpectralEmbedding, ThresholdBasis};
use crate::graph::min_eigenvalue;
use crate::instance::PlantedInstance;
use crate::seed::Rng;

/// How much of each check to sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaTrials {
    /// Outside vertices examined; all of them when larger than `n - k`.
    pub columns: usize,
    /// Random unit directions per column for the second-term check.
    pub directions: usize,
    /// Random `p`-subsets of `S` for the Monte-Carlo mean of `M`.
    pub monte_carlo: usize,
}

impl Default for LemmaTrials {
    fn default() -> Self {
        LemmaTrials {
            columns: 50,
            directions: 20,
            monte_carlo: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub dim: usize,
    pub columns: Vec<usize>,
    /// `max_{l,i} |v⁽ˡ⁾_i|` against `2/sqrt(d)`.
    pub linf_max: f64,
    pub linf_bound: f64,
    /// `‖Σ_{i∈N(j)∩S} w⁽ⁱ⁾‖` per column, against `3 sqrt(L ln k)`.
    pub sum_norms: Vec<f64>,
    pub sum_bound: f64,
    /// `λ_min(Σ_{i∈N(j)∩S} w⁽ⁱ⁾ w⁽ⁱ⁾ᵀ)` per column, against `p/2`.
    pub isotropy_min: Vec<f64>,
    pub isotropy_bound: f64,
    /// Largest sampled `Σ_{i∈N(j)∩S} min(0, ⟨w⁽ⁱ⁾, y⟩)` per column, against `-(p/16) sqrt(d/L)`.
    pub second_term_max: Vec<f64>,
    pub second_term_bound: f64,
    /// Largest `|mean(M_rs) - p δ_rs| / stderr` over entries.
    pub monte_carlo_z: f64,
    pub monte_carlo_samples: usize,
}

fn fraction(values: &[f64], ok: impl Fn(f64) -> bool) -> f64 {
    if values.is_empty() {
        return 1.0;
    }
    values.iter().filter(|&&v| ok(v)).count() as f64 / values.len() as f64
}

impl LemmaReport {
    pub fn linf_holds(&self) -> bool {
        self.linf_max <= self.linf_bound
    }

    pub fn sum_fraction(&self) -> f64 {
        fraction(&self.sum_norms, |v| v <= self.sum_bound)
    }

    pub fn isotropy_fraction(&self) -> f64 {
        fraction(&self.isotropy_min, |v| v >= self.isotropy_bound)
    }

    pub fn second_term_fraction(&self) -> f64 {
        fraction(&self.second_term_max, |v| v <= self.second_term_bound)
    }

    /// Entrywise agreement of the Monte-Carlo mean with `pI` at 4 standard errors.
    pub fn monte_carlo_holds(&self) -> bool {
        self.monte_carlo_z <= 4.0
    }
}

fn random_unit(dim: usize, rng: &mut Rng) -> DVector<f64> {
    loop {
        let y = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let norm: f64 = y.norm();
        if norm > 1e-12 {
            return y / norm;
        }
    }
}

pub fn empirical_lemma_checks(
    inst: &PlantedInstance,
    basis: &ThresholdBasis,
    emb: &SpectralEmbedding,
    trials: &LemmaTrials,
    rng: &mut Rng,
) -> LemmaReport {
    let params = &inst.params;
    let (k, p, d) = (params.k as f64, params.p, params.d as f64);
    let l = emb.dim();

    let mut outside = inst.outside();
    outside.shuffle(rng);
    outside.truncate(trials.columns);
    outside.sort_unstable();

    let mut sum_norms = Vec::with_capacity(outside.len());
    let mut isotropy_min = Vec::with_capacity(outside.len());
    let mut second_term_max = Vec::with_capacity(outside.len());
    for &j in &outside {
        let nbrs: Vec<usize> = inst
            .graph
            .neighbors(j)
            .iter()
            .copied()
            .filter(|&i| emb.position(i).is_some())
            .collect();
        let cols: Vec<usize> = nbrs.iter().map(|&i| emb.position(i).unwrap()).collect();
        let w = emb.w.select_columns(cols.iter());
        sum_norms.push(w.column_sum().norm());
        if l > 0 {
            isotropy_min.push(min_eigenvalue(&(&w * w.transpose())).unwrap_or(f64::NAN));
            let worst = (0..trials.directions)
                .map(|_| {
                    let y = random_unit(l, rng);
                    (w.transpose() * y).iter().map(|&v| v.min(0.0)).sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
            second_term_max.push(worst);
        }
    }

    // each vertex of S joins the subset independently with probability p
    let mut sum = DMatrix::<f64>::zeros(l, l);
    let mut sum_sq = DMatrix::<f64>::zeros(l, l);
    for _ in 0..trials.monte_carlo {
        let subset: Vec<usize> = emb.vertices.iter().copied().filter(|_| rng.random_bool(p)).collect();
        let m = emb.partial_gram(&subset);
        sum += &m;
        sum_sq += m.component_mul(&m);
    }
    let mut monte_carlo_z = 0.0f64;
    if trials.monte_carlo > 1 {
        let s = trials.monte_carlo as f64;
        for r in 0..l {
            for c in 0..l {
                let mean = sum[(r, c)] / s;
                let var = ((sum_sq[(r, c)] / s - mean * mean) * s / (s - 1.0)).max(0.0);
                let target = if r == c { p } else { 0.0 };
                let se = (var / s).sqrt();
                let dev = (mean - target).abs();
                let z = if se > 0.0 { dev / se } else if dev < 1e-12 { 0.0 } else { f64::INFINITY };
                monte_carlo_z = monte_carlo_z.max(z);
            }
        }
    }

    LemmaReport {
        dim: l,
        columns: outside,
        linf_max: basis.max_abs_entry(),
        linf_bound: 2.0 / d.sqrt(),
        sum_norms,
        sum_bound: 3.0 * (l as f64 * k.ln()).sqrt(),
        isotropy_min,
        isotropy_bound: p / 2.0,
        second_term_max,
        second_term_bound: -(p / 16.0) * (d / l.max(1) as f64).sqrt(),
        monte_carlo_z,
        monte_carlo_samples: trials.monte_carlo,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{spectral_embedding, threshold_basis};
    use crate::instance::{gen_random_planted, BipartiteTopology, ModelParams};
    use crate::seed::rng_from_seed;

    #[test]
    fn p_one_neighbourhoods_cover_s() {
        let inst = gen_random_planted(ModelParams::new(30, 10, 3, 1.0).unwrap(), &BipartiteTopology::RandomRegular, 4).unwrap();
        let basis = threshold_basis(&inst, 1.5).unwrap();
        let emb = spectral_embedding(&basis);
        let rep = empirical_lemma_checks(&inst, &basis, &emb, &LemmaTrials::default(), &mut rng_from_seed(0));
        assert_eq!(rep.columns.len(), 20);
        // every outside vertex sees all of S, so the sum vanishes and M = I
        assert!(rep.sum_norms.iter().all(|&v| v < 1e-10));
        assert!(rep.isotropy_min.iter().all(|&v| (v - 1.0).abs() < 1e-10));
        assert!(rep.monte_carlo_z < 1e-6 || rep.monte_carlo_holds());
    }

    #[test]
    fn monte_carlo_mean_tracks_p() {
        let inst = gen_random_planted(ModelParams::new(100, 40, 10, 0.5).unwrap(), &BipartiteTopology::RandomRegular, 6).unwrap();
        let basis = threshold_basis(&inst, 5.0).unwrap();
        let emb = spectral_embedding(&basis);
        let trials = LemmaTrials {
            columns: 10,
            directions: 5,
            monte_carlo: 400,
        };
        let rep = empirical_lemma_checks(&inst, &basis, &emb, &trials, &mut rng_from_seed(1));
        assert!(rep.monte_carlo_z < 6.0, "{}", rep.monte_carlo_z);
        assert_eq!(rep.dim, basis.len());
    }
}
