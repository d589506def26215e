//! Learning the Markov equivalence class (CPDAG) of a discrete Bayesian
//! network from complete categorical data.
//!
//! The learner chains four stages:
//!
//! 1. pairwise chi-square tests and an *extended maximal spanning graph*
//!    ([`emsg`]) prune the complete graph to a sparse undirected skeleton;
//! 2. an exact integer program over BIC-scored parent sets restricted to that
//!    skeleton is solved with lazily generated cycle cuts ([`solver`]);
//! 3. the optimal DAG is collapsed to its CPDAG ([`graph::cpdag_of`]);
//! 4. a triangulation loop tests unconnected pairs that share a neighbour,
//!    conditioning on a minimum d-separating set, and grows the skeleton
//!    until no dependency is left unexplained ([`pipeline::learn_mecip`]).
//!
//! Supporting modules read and sample benchmark networks ([`network`]), load
//! CSV data ([`data`]), compute statistics ([`stats`]), and run replicated
//! benchmarks ([`bench`]). A greedy hill-climbing baseline with a tabu list
//! lives in [`pipeline::learn_hc_tabu`].
//!
//! ```no_run
//! use mecip::{network, pipeline::{self, LearnConfig}};
//!
//! let net = network::read_bif("networks/asia.bif")?;
//! let data = network::forward_sample(&net, 10_000, 7)?;
//! let result = pipeline::learn_mecip(&data, &LearnConfig::default())?;
//! print!("{}", result.cpdag.to_edge_list(data.names()));
//! # Ok::<(), mecip::Error>(())
//! ```

pub mod bench;
pub mod cli;
pub mod data;
pub mod emsg;
mod error;
pub mod graph;
pub mod network;
pub mod pipeline;
pub mod rng;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
