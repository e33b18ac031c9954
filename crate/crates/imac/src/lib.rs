//! Rate toolkit for the two-cell interfering multiple access channel.
//!
//! Two multiple-access cells, two users each, interfere with one another.
//! This crate computes what the channel can carry under three models and
//! checks the answers against ground truth:
//!
//! - [`ld`] — the linear-deterministic model: bit vectors, shift matrices,
//!   block-aligned level assignment, and the weak-interference sum rate.
//! - [`ltd`] — the lower-triangular-deterministic model: per-regime bit
//!   allocations for the whole interference range, decoding-condition
//!   margins, the five-way upper bound, and constant-gap reports.
//! - [`gauss`] — the Gaussian channel: lattice power partitioning, per-level
//!   successive-decoding rates, alignment checks, and constellation-distance
//!   sampling.
//! - [`oracle`] — validation: rank-based decodability of concrete instances,
//!   Monte Carlo outage estimation, and exhaustive best-rate search at desk
//!   scale.
//!
//! Start with the `examples/` directory: each example exercises one of these
//! capabilities end to end. The `imac` binary exposes the same operations as
//! subcommands emitting deterministic CSV.

pub mod alloc;
pub mod cli;
pub mod config;
pub mod error;
pub mod gauss;
pub mod gf2;
pub mod ld;
pub mod ltd;
pub mod oracle;
pub mod rat;
pub mod rng;

pub use config::{Cell, ImacConfig, SymmetricConfig};
pub use error::Error;
