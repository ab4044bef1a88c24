//! Strong, weak and branching bisimulation for labelled transition systems
//! with termination and for Markov reward chains, phrased as matrix
//! equations over collectors and distributors.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod lts;
pub mod mrc;
pub mod partition;
pub mod probe;
pub mod random;
pub mod report;

pub use error::{Error, Result};
pub use report::{BisimKind, CheckReport};
