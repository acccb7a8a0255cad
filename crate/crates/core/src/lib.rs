//! Planted bipartite subgraph recovery.
//!
//! Instance generators for the random and semi-random planted models, three
//! recovery algorithms (degree sorting, an SDP relaxation and subspace
//! enumeration), and a numerical dual certificate for the SDP.

pub mod certificate;
pub mod degree;
pub mod error;
pub mod graph;
pub mod instance;
pub mod sdp;
pub mod seed;
pub mod subspace;

pub use error::{Error, Result};
pub use graph::Graph;
pub use instance::{BipartiteTopology, ModelParams, PlantedInstance};
