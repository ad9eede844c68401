//! Exact verification and enumeration of bounded ratios on Lorentzian
//! matrices.
//!
//! Modules follow the data flow: [`lorentzian`] matrices feed [`ratio`]
//! evaluation; [`cutcone`] enumerates the primitive ratios as cut-cone facets;
//! [`metric`] works in the log domain with trees and hyperbolicity;
//! [`constants`] holds closed-form optimal constants and their numerical
//! cross-checks; [`subfree`] expands ratios as integer polynomials.

#![allow(clippy::needless_range_loop)]

pub mod constants;
pub mod cutcone;
pub mod error;
pub mod json;
pub mod linalg;
pub mod lorentzian;
pub mod metric;
pub mod ratio;
pub mod reproduce;
pub mod rng;
pub mod scalar;
pub mod subfree;

pub use error::{Error, Result};
pub use scalar::Rational;
