//! Property testers for bounded-degree graphs in the adjacency-list query
//! model, and an exact verification lab for the matching-union graph
//! distribution used to lower-bound expansion testing.

pub mod cli;
pub mod collision;
pub mod error;
pub mod graph;
pub mod instances;
pub mod kwise;
pub mod lowerbound;
pub mod rng;
pub mod testers;
pub mod walk;

pub use error::{Error, Result};
