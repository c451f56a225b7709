//! Corner-free subsets of `[N]^2`.
//!
//! A corner is a triple `(x, y), (x + d, y), (x, y + d)` with `d != 0`. The
//! crate builds the sphere-slice construction over base-`q` digit vectors
//! ([`green`]), counts its slices exactly, streams their points, and checks
//! corner-freeness ([`corner`]). A Behrend-sphere baseline ([`behrend`]) and an
//! exact small-grid search ([`oracle`]) give points of comparison.

pub mod behrend;
pub mod cli;
pub mod corner;
pub mod digits;
pub mod error;
pub mod green;
pub mod oracle;
mod radius_dp;
pub mod report;

pub use error::{Error, Result};
