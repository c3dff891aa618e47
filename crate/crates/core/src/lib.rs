//! Achievable rate regions for the two-user state-dependent generalized
//! multiple-access channel (GMAC).
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! - [`scalar`]: dB conversion, the Gaussian capacity function and
//!   differential entropy.
//! - [`geometry`]: split-rate polytopes, Fourier–Motzkin projection onto
//!   `(R1, R2)`, convex unions and containment of 2-D regions.
//! - [`gaussian`]: closed-form Gaussian regions (full CSIT, doubly dirty,
//!   one fully informed encoder), optimal multi-layer dirty-paper coding
//!   coefficients, MMSE residuals and a Monte-Carlo entropy oracle.
//! - [`discrete`]: the finite-alphabet achievable region from a joint pmf,
//!   factorization checks and the special-case fixtures.
//! - [`sweep`]: weighted-sum boundary tracing over coding parameters.
//!
//! File formats, plotting and the command-line front-end live in the
//! `gmac-regions` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod discrete;
pub mod gaussian;
pub mod geometry;
pub mod scalar;
pub mod sweep;

mod linalg;

pub use geometry::{RateRegion2D, SplitRate, SplitRatePolytope};
pub use scalar::{capacity_fn, db_to_linear, gaussian_entropy, Bits, DbValue, DomainError};
