//! Biclustering for bipartite stochastic block models.
//!
//! The crate covers the full pipeline on an `n × m` biadjacency matrix:
//! sampling from the model ([`model`]), the pseudo-likelihood operators and
//! the alternating algorithm built on them ([`pl`]), spectral initialization
//! ([`spectral`]), the partitioned pipeline with label matching
//! ([`provable`]), Chernoff-information diagnostics ([`info`]) and
//! evaluation ([`metrics`]).

pub mod assignment;
pub mod cli;
pub mod error;
pub mod graph;
pub mod info;
pub mod io;
pub mod labels;
pub mod metrics;
pub mod model;
pub mod pl;
pub mod provable;
mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{BiAdjacency, SparseBi, WeightedBiAdjacency};
pub use labels::{HardLabels, LabelsRef, SoftLabels};
pub use model::{Connectivity, MeanParams, SampleMode};
