//! Metric dimension of random trees: samplers, an exact linear-time metric
//! dimension routine with a brute-force oracle, fringe statistics, the
//! limiting constants of `β(T_n)/n`, and a Monte Carlo harness.

pub mod constants;
pub mod experiments;
pub mod fringe;
pub mod generators;
pub mod metric_dimension;
pub mod tree;
pub mod verify;

pub use tree::{RootedTree, TreeError};
