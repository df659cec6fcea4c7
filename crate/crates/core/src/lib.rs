//! Entanglement witnesses and their mirrored partners.
//!
//! A witness `W` is paired with an operator `M` satisfying `W + M = μ I`, where
//! the expectation of `W` on separable states ranges over `[0, μ]`. The crate
//! provides dense linear algebra on composite systems, stabilizer and graph
//! constructions, a catalog of witness families, product-state optimization,
//! and analysis of detection and decomposability.

pub mod acceptance;
pub mod analysis;
pub mod catalog;
pub mod error;
pub mod graphs;
pub mod linops;
pub mod mirror;
pub mod sepopt;

pub use catalog::{StateSpec, Witness};
pub use error::{Error, Result};
pub use linops::{Dims, Operator};
pub use mirror::{MirrorClass, MirrorPair, Window};
