//! Correlated heavy hitters over two-dimensional streams.
//!
//! A stream of `(x, y)` tuples has correlated heavy hitters `(x, y)` when the
//! primary item `x` is frequent (`f_x > φ1·N`) and `y` is frequent inside the
//! sub-stream of `x` (`f_xy > φ2·f_x`). This crate provides:
//!
//! - [`ChhSketch`]: two independent Space Saving summaries, one over
//!   primaries and one over whole tuples, with O(1) worst-case update.
//! - [`MgchhSketch`]: the nested Misra-Gries baseline.
//! - [`ExactCounts`]: an unbounded exact oracle.
//! - [`datagen`] and [`eval`]: Zipf stream generation, equal-space
//!   configuration, accuracy metrics and throughput measurement.

pub mod algo;
pub mod cli;
pub mod csschh;
pub mod datagen;
pub mod error;
pub mod eval;
pub mod io;
pub mod mgchh;
pub mod oracle;
pub mod report;
pub mod summaries;

pub use algo::{Algorithm, ChhAlgorithm};
pub use csschh::{chh_sizing, ChhParams, ChhSizing, ChhSketch};
pub use error::{ChhError, Result};
pub use mgchh::{mgchh_sizing, MgchhSketch};
pub use oracle::ExactCounts;
pub use report::{Chh, ChhReport, Primary};
pub use summaries::{MgSummary, StreamSummary};

/// Opaque stream item. Generated and file-based streams carry 32-bit values.
pub type Item = u64;

/// Packs a tuple into the single key used by the tuple summary.
#[inline]
pub fn pair_key(x: Item, y: Item) -> u128 {
    ((x as u128) << 64) | y as u128
}

#[inline]
pub fn unpack_pair(key: u128) -> (Item, Item) {
    ((key >> 64) as Item, key as Item)
}
