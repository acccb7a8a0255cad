//! Sweep configuration.
//!
//! ```toml
//! model = "random"
//! topology = "random_regular"
//! algorithms = "degree,sdp"
//! trials = 20
//! master_seed = 7
//! output = "results.csv"
//!
//! [grid]
//! n = [120, 240]
//! k = "40"
//! d = 14
//! p = "0.3,0.5"
//!
//! [adversary]
//! random_extra = 0.05
//! ```
//!
//! Grid entries and `algorithms` accept a scalar, an array or a comma list.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use itertools::iproduct;
use plantedbip::certificate::CertifyConfig;
use plantedbip::instance::{AdversaryStrategy, BipartiteTopology, ModelParams};
use plantedbip::sdp::SolverConfig;
use plantedbip::subspace::SubspaceParams;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[default]
    Random,
    /// Bernoulli cross edges; the outside block is drawn from G(n - k, p)
    /// and must pass the eigenvalue condition.
    SemiRandom,
}

impl FromStr for Model {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(Model::Random),
            "semi_random" | "semi-random" => Ok(Model::SemiRandom),
            other => Err(HarnessError::Config(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Degree,
    Sdp,
    Subspace,
    Certify,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Degree, Algorithm::Sdp, Algorithm::Subspace, Algorithm::Certify];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Degree => "degree",
            Algorithm::Sdp => "sdp",
            Algorithm::Subspace => "subspace",
            Algorithm::Certify => "certify",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| HarnessError::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Split a comma list, ignoring surrounding whitespace.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| HarnessError::Config(format!("{s:?}: {e}"))))
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ListSpec<T> {
    Many(Vec<T>),
    One(T),
    Text(String),
}

fn comma_list<'de, D, T>(de: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de> + FromStr,
    T::Err: fmt::Display,
{
    match ListSpec::<T>::deserialize(de)? {
        ListSpec::Many(v) => Ok(v),
        ListSpec::One(x) => Ok(vec![x]),
        ListSpec::Text(s) => parse_list(&s).map_err(serde::de::Error::custom),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TopologySpec {
    Name(String),
    Full(BipartiteTopology),
}

fn topology<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<BipartiteTopology, D::Error> {
    match TopologySpec::deserialize(de)? {
        TopologySpec::Name(s) => s.parse().map_err(serde::de::Error::custom),
        TopologySpec::Full(t) => Ok(t),
    }
}

fn default_alpha() -> Vec<f64> {
    vec![1.0 / 6.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(deserialize_with = "comma_list")]
    pub n: Vec<usize>,
    #[serde(deserialize_with = "comma_list")]
    pub k: Vec<usize>,
    #[serde(deserialize_with = "comma_list")]
    pub d: Vec<usize>,
    #[serde(deserialize_with = "comma_list")]
    pub p: Vec<f64>,
    #[serde(default = "default_alpha", deserialize_with = "comma_list")]
    pub alpha: Vec<f64>,
}

/// Optional replacements for the subspace defaults derived from each cell.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubspaceOverrides {
    pub tau_prime: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub net_cap: Option<usize>,
}

impl SubspaceOverrides {
    pub fn resolve(&self, params: &ModelParams) -> SubspaceParams {
        let base = SubspaceParams::defaults(params.n, params.k, params.d, params.p);
        SubspaceParams {
            tau_prime: self.tau_prime.unwrap_or(base.tau_prime),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            delta: self.delta.unwrap_or(base.delta),
            net_cap: self.net_cap.unwrap_or(base.net_cap),
        }
    }
}

/// Per-algorithm solver settings shared by every trial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgorithmSettings {
    pub sdp: SolverConfig,
    pub certify: CertifyConfig,
    pub subspace: SubspaceOverrides,
}

fn one() -> usize {
    1
}

fn default_output() -> PathBuf {
    PathBuf::from("results.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub model: Model,
    #[serde(default, deserialize_with = "topology")]
    pub topology: BipartiteTopology,
    #[serde(deserialize_with = "comma_list")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub adversary: Option<AdversaryStrategy>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub grid: Grid,
    #[serde(default)]
    pub sdp: SolverConfig,
    #[serde(default)]
    pub certify: CertifyConfig,
    #[serde(default)]
    pub subspace: SubspaceOverrides,
}

/// Command-line replacements for config values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub model: Option<Model>,
    pub algorithms: Option<Vec<Algorithm>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub n: Option<Vec<usize>>,
    pub k: Option<Vec<usize>>,
    pub d: Option<Vec<usize>>,
    pub p: Option<Vec<f64>>,
}

/// One point of the parameter grid. Parameters are not validated here so
/// that impossible cells surface as recorded generation errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub alpha: f64,
}

impl Cell {
    pub fn params(&self) -> plantedbip::Result<ModelParams> {
        ModelParams::with_alpha(self.n, self.k, self.d, self.p, self.alpha)
    }
}

impl ExperimentConfig {
    /// A single-cell config with library defaults everywhere else.
    pub fn single(n: usize, k: usize, d: usize, p: f64, algorithms: Vec<Algorithm>) -> Self {
        ExperimentConfig {
            model: Model::Random,
            topology: BipartiteTopology::RandomRegular,
            algorithms,
            trials: 1,
            master_seed: 0,
            adversary: None,
            output: default_output(),
            grid: Grid {
                n: vec![n],
                k: vec![k],
                d: vec![d],
                p: vec![p],
                alpha: default_alpha(),
            },
            sdp: SolverConfig::default(),
            certify: CertifyConfig::default(),
            subspace: SubspaceOverrides::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(m) = o.model {
            self.model = m;
        }
        if let Some(a) = &o.algorithms {
            self.algorithms = a.clone();
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
        if let Some(s) = o.master_seed {
            self.master_seed = s;
        }
        if let Some(p) = &o.output {
            self.output = p.clone();
        }
        if let Some(v) = &o.n {
            self.grid.n = v.clone();
        }
        if let Some(v) = &o.k {
            self.grid.k = v.clone();
        }
        if let Some(v) = &o.d {
            self.grid.d = v.clone();
        }
        if let Some(v) = &o.p {
            self.grid.p = v.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.to_string()));
        let g = &self.grid;
        if g.n.is_empty() || g.k.is_empty() || g.d.is_empty() || g.p.is_empty() || g.alpha.is_empty() {
            return bad("every grid list must be nonempty");
        }
        if g.p.iter().chain(&g.alpha).any(|x| !x.is_finite()) {
            return bad("grid values must be finite");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms requested");
        }
        let mut sorted = self.algorithms.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.algorithms.len() {
            return bad("algorithms listed twice");
        }
        Ok(())
    }

    /// Grid cross product, `n` varying slowest and `alpha` fastest.
    pub fn cells(&self) -> Vec<Cell> {
        let g = &self.grid;
        iproduct!(&g.n, &g.k, &g.d, &g.p, &g.alpha)
            .enumerate()
            .map(|(index, (&n, &k, &d, &p, &alpha))| Cell { index, n, k, d, p, alpha })
            .collect()
    }

    pub fn settings(&self) -> AlgorithmSettings {
        AlgorithmSettings {
            sdp: self.sdp,
            certify: self.certify,
            subspace: self.subspace,
        }
    }
}
