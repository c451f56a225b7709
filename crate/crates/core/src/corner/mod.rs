//! Lattice point sets and the corner / 3AP verifiers.
//!
//! Grid coordinates are 0-based: `[N]` means `{0, .., N-1}`. Corner-freeness
//! is invariant under translation, so this agrees with any 1-based reading.

mod point_set;
mod verify;

pub use point_set::{Point, PointSet, MAX_BOUND};
pub use verify::{all_corners, find_corner, is_3ap_free, CornerWitness};
