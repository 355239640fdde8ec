//! Jittered sampling, star and L² discrepancy, and the experiments that
//! compare jittered point sets against i.i.d. uniform ones.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, point sets, anchored boxes and counting.
//! - [`partition`]: equal-measure partitions of the unit cube built from boxes.
//! - [`generators`]: uniform, grid, jittered, partition-jittered and Hammersley sets.
//! - [`discrepancy`]: exact and heuristic star discrepancy, L² closed forms.
//! - [`bounds`]: closed-form bounds and constants.
//! - [`experiments`]: seeded, replicated Monte Carlo studies and their reports.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` lists them.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod discrepancy;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod geometry;
pub mod partition;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{AnchoredBox, Point, PointSet, Provenance};
