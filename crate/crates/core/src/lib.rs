//! Community detection by modularity maximization and community-aware node
//! features over immutable sparse graphs.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, thread pools and
//! the command-line front end live in the `commaware` crate.
//!
//! A typical pipeline:
//!
//! ```
//! use commaware_core::{detect, features, DetectConfig, Graph};
//!
//! let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
//! let found = detect::detect(&g, &DetectConfig::default().with_seed(7)).unwrap();
//! assert_eq!(found.partition.num_communities(), 2);
//! let matrix = features::compute_all(&g, &found.partition, 1.0).unwrap();
//! assert_eq!(matrix.num_rows(), 6);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classical;
pub mod detect;
mod error;
pub mod eval;
pub mod features;
pub mod generator;
pub mod graph;
pub mod partition;
pub mod quality;
pub mod rng;

pub use detect::DetectConfig;
pub use error::{Error, Result};
pub use features::FeatureMatrix;
pub use generator::{GenOutput, GenSpec};
pub use graph::{CleanReport, Graph, NodeId};
pub use partition::Partition;
