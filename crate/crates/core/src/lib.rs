//! High-precision evaluation of q-series, q-analogue Euler sums, the stuffle
//! word algebra, Jackson q-calculus, and classical Euler sums, together with
//! a registry of identities that can be verified numerically over parameter
//! grids with certified truncation-error accounting.
//!
//! The crate is `no_std` (alloc required). All values are carried as
//! [`numerics::QReal`]: a high-precision float paired with a conservative
//! absolute error bound. Series evaluators certify their truncation tails, so
//! a reported bound is a true bound on the distance to the exact sum.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classical;
pub mod error;
pub mod identities;
pub mod jackson;
pub mod numerics;
pub mod qseries;
pub mod stuffle;

pub use error::{Error, Result};
pub use numerics::{Precision, QParam, QReal};
