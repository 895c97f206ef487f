//! Exact computations with free-group words, order-derived seminorms, weight
//! functions and multiplier-twisted infinite products in linear groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`] - canonical words of the free group over the ordered alphabet
//!   `0, 1, 2, ...` with complete/partial cancellation.
//! * [`extrema`] - local extrema of sequences with distinct neighbours.
//! * [`seminorms`] - `mu_x`, `eta`, `delta_j` and the mountain checker.
//! * [`weights`] - weight functions, multipliers and permutations of the naturals.
//! * [`groups`] - four instrumented model groups with linear topologies.
//! * [`lab`] - partial products, window verdicts and divergence witnesses.
//! * [`suites`] - seeded property suites driven by `prodlab selftest`.

pub mod algebra;
pub mod error;
pub mod extrema;
pub mod groups;
pub mod lab;
pub mod random;
pub mod seminorms;
pub mod suites;
pub mod weights;
pub mod words;

pub use algebra::DiscreteGroup;
pub use error::{Error, Result};
pub use extrema::{ExtremaReport, FdSeq};
pub use words::{Letter, Monom, Word};
