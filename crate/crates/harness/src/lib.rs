//! Experiment orchestration for planted bipartite recovery: TOML sweep
//! configuration, per-trial execution of every algorithm on a shared instance,
//! CSV reporting and a brute-force oracle for micro instances.

pub mod config;
pub mod error;
pub mod oracle;
pub mod sweep;
pub mod trial;

pub use config::{Algorithm, Cell, ExperimentConfig, Model, Overrides};
pub use error::{HarnessError, Result};
pub use oracle::brute_force_recover;
pub use sweep::{run_sweep, SweepReport};
pub use trial::{run_trial, TrialResult};
