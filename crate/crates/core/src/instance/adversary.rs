use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::PlantedInstance;
use crate::error::{Error, Result};
use crate::seed::Rng;

/// Edge additions restricted to `(V \ S) x (V \ S)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryStrategy {
    /// Add each outside non-edge independently with this probability.
    RandomExtra(f64),
    ExplicitEdges(Vec<(usize, usize)>),
}

pub fn apply_monotone_adversary(
    inst: &PlantedInstance,
    strategy: &AdversaryStrategy,
    rng: &mut Rng,
) -> Result<PlantedInstance> {
    let mut out = inst.clone();
    let in_s = inst.membership();
    match strategy {
        AdversaryStrategy::ExplicitEdges(edges) => {
            for &(u, v) in edges {
                if u >= in_s.len() || v >= in_s.len() {
                    return Err(Error::VertexOutOfRange { vertex: u.max(v), n: in_s.len() });
                }
                if in_s[u] || in_s[v] {
                    return Err(Error::AdversaryTouchesPlanted(u, v));
                }
                if !out.graph.add_edge(u, v)? {
                    return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
                }
                out.adversary_edges.push((u.min(v), u.max(v)));
            }
        }
        AdversaryStrategy::RandomExtra(f) => {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::InvalidParams(format!("adversary fraction {f} outside [0, 1]")));
            }
            let rest = inst.outside();
            for (a, &u) in rest.iter().enumerate() {
                for &v in &rest[a + 1..] {
                    if !inst.graph.has_edge(u, v) && rng.random_bool(*f) {
                        out.graph.add_edge(u, v)?;
                        out.adversary_edges.push((u, v));
                    }
                }
            }
        }
    }
    Ok(out)
}
