//! Exact computer algebra for countably-based Lie algebras given by guarded
//! bracket rules.
//!
//! Infinite algebras are studied through finite weight windows: a
//! [`Presentation`](presentation::Presentation) is truncated to a
//! [`FiniteQuotient`](filtration::FiniteQuotient), and every infinite
//! property is reported as a three-valued [`Verdict`] with its evidence depth.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructions;
pub mod derivations;
mod error;
pub mod exactlin;
pub mod filtration;
pub mod presentation;
mod sampling;
mod verdict;

pub use error::Error;
pub use sampling::RandomCheck;
pub use verdict::{Status, Verdict};

pub type Result<T, E = Error> = core::result::Result<T, E>;
