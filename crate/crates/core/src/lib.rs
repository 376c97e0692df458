//! Random graphs just above the connectivity threshold.
//!
//! The crate finds and certifies a spanning KeyChain `KC(n, t, ℓ)` (a cycle
//! with `t` pendant keys spaced `ℓ` apart) inside a host graph, together
//! with the supporting tools: property checkers for sparse random graphs,
//! Pósa rotation-extension, booster augmentation, expander certification
//! and maximum common edge subgraph experiments.
//!
//! Vertices are labelled `1..=n`.

pub mod embed;
pub mod error;
pub mod graph;
pub mod mcs;
pub mod params;
pub mod posa;
pub mod properties;
pub mod seed;

pub use error::{Error, Result};
pub use graph::Graph;
pub use params::{compute_parameters, compute_parameters_big, KeyChainParams, Profile};
