//! Exact combinatorics and cohomology for the moduli spaces of stable
//! genus-zero curves with marked points.
//!
//! The marked points are labelled `0, 1, ..., n`; everything here is phrased
//! in terms of the ground set `S = {1..n}`. Subsets are bitmasks, families of
//! subsets are sorted in the Kapranov order, and all arithmetic is exact.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod forests;
pub mod groundset;
pub mod keel;
pub mod oracle;
pub mod points;
pub mod poincare;
pub mod ring;
pub mod treerep;

pub use error::{Error, Result};
pub use groundset::{Family, GroundSet, Subset, SubsetRelation};
