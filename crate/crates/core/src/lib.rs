//! Joint index coding and incentive design for selfish clients.
//!
//! A server broadcasts sparse GF(2) combinations of data chunks to clients
//! that each want one chunk, hold private side information and value their
//! chunk privately. This crate provides the coding schemes (optimal
//! instant decoding via maximum-weight matching, greedy min-cost cycle
//! packing, and the `γ/√|C|` variant), their truthful payment rules,
//! exhaustive oracles, truthfulness audits and the simulation campaigns.
//!
//! All valuations are exact integers in micro-units; one transmission
//! costs [`model::UNIT`] micro-units.

pub mod error;
pub mod experiment;
pub mod graph;
pub mod matching;
pub mod mechanism;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
