//! Independent-set problems on general and unit-disk graphs.
//!
//! The crate solves, counts, samples and reduces independent-set-family
//! problems, and simulates the Rydberg-blockade encoding of those problems
//! with a small state-vector simulator. Every quantum result can be checked
//! against the exact classical routines in [`oracle`].

pub mod applications;
pub mod error;
pub mod generate;
pub mod hash;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod postprocess;
pub mod reductions;
pub mod rng;
pub mod rydberg;
pub mod sampling;

pub use error::{Error, Result};
pub use graph::{classify_set, Graph, GraphKind, SetFlags, VertexSet};
pub use par::Exec;
