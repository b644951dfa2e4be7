//! Command-line tooling around the `qtanner` library: build code bundles,
//! inspect their parameters, and run Monte Carlo decoding trials.

pub mod cli;
pub mod error;
pub mod pipeline;
pub mod sim;
pub mod stats;

pub use error::{Result, SimError};
