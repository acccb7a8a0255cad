//! Planted instances: parameters, generators, the monotone adversary and archives.

mod adversary;
mod archive;
mod bipartite;
mod planted;

pub use adversary::{apply_monotone_adversary, AdversaryStrategy};
pub use archive::{read_archive, write_archive, InstanceMeta};
pub use bipartite::gen_regular_bipartite;
pub use planted::{
    check_semirandom_condition, gen_random_planted, gen_random_planted_at, gen_semi_random,
    gnp, perturbation_matrix, SemiRandomCheck,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{complement, Graph};

/// Model parameters `(n, k, d, p, alpha)`; `gamma = d / (p k)` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    1.0 / 6.0
}

impl ModelParams {
    pub fn new(n: usize, k: usize, d: usize, p: f64) -> Result<Self> {
        Self::with_alpha(n, k, d, p, default_alpha())
    }

    pub fn with_alpha(n: usize, k: usize, d: usize, p: f64, alpha: f64) -> Result<Self> {
        let params = ModelParams { n, k, d, p, alpha };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.k == 0 || !self.k.is_multiple_of(2) {
            return bad(format!("k = {} must be positive and even", self.k));
        }
        if self.k > self.n {
            return bad(format!("k = {} exceeds n = {}", self.k, self.n));
        }
        if self.d == 0 || self.d > self.k / 2 {
            return bad(format!("d = {} must lie in [1, k/2 = {}]", self.d, self.k / 2));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("p = {} must lie in [0, 1]", self.p));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0 / 6.0 + 1e-12) {
            return bad(format!("alpha = {} must lie in (0, 1/6]", self.alpha));
        }
        Ok(())
    }

    /// `d / (p k)`; infinite when `p = 0`.
    pub fn gamma(&self) -> f64 {
        self.d as f64 / (self.p * self.k as f64)
    }

    /// `((1/2 - alpha) / (1/2 + alpha)) d`, the default threshold level.
    pub fn tau(&self) -> f64 {
        (0.5 - self.alpha) / (0.5 + self.alpha) * self.d as f64
    }
}

/// Family used for the planted `d`-regular bipartite block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", content = "offsets", rename_all = "snake_case")]
pub enum BipartiteTopology {
    #[default]
    RandomRegular,
    CompleteBalanced,
    /// Right neighbours of left vertex `i` are `(i + o) mod k/2`; empty means `0..d`.
    Circulant(Vec<usize>),
}

impl std::str::FromStr for BipartiteTopology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_regular" | "random" => Ok(BipartiteTopology::RandomRegular),
            "complete_balanced" | "complete" => Ok(BipartiteTopology::CompleteBalanced),
            "circulant" => Ok(BipartiteTopology::Circulant(Vec::new())),
            other => Err(Error::Parse(format!("unknown topology {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub params: ModelParams,
    pub seed: u64,
    pub adversary_edges: Vec<(usize, usize)>,
}

impl PlantedInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `S = S1 ∪ S2`, ascending.
    pub fn planted_set(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.s1.iter().chain(&self.s2).copied().collect();
        s.sort_unstable();
        s
    }

    /// `V \ S`, ascending.
    pub fn outside(&self) -> Vec<usize> {
        complement(self.n(), &self.planted_set())
    }

    pub fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.n()];
        for &v in self.s1.iter().chain(&self.s2) {
            m[v] = true;
        }
        m
    }

    /// `u = 1_{S1} - 1_{S2}` over all `n` coordinates.
    pub fn signed_indicator(&self) -> DVector<f64> {
        let mut u = DVector::zeros(self.n());
        for &v in &self.s1 {
            u[v] = 1.0;
        }
        for &v in &self.s2 {
            u[v] = -1.0;
        }
        u
    }

    /// `g = u / sqrt(k)`.
    pub fn unit_indicator(&self) -> DVector<f64> {
        self.signed_indicator() / (self.params.k as f64).sqrt()
    }

    /// `A|_{S x S}` with rows in ascending vertex order.
    pub fn planted_block(&self) -> DMatrix<f64> {
        self.graph.induced_adjacency(&self.planted_set())
    }
}
