//! Exact symbol calculus for the Hodge–Dirac operator `D = d + d*` at a point
//! in normal coordinates, with pointwise Wodzicki residue densities and the
//! metric and Einstein spectral functionals built from them.
//!
//! All arithmetic is exact over `Q(i)`; sphere volumes are carried as the
//! symbolic unit `v_{n-1}`.

#![allow(clippy::needless_range_loop, clippy::suspicious_arithmetic_impl)]

pub mod curvature;
pub mod dsl;
pub mod error;
pub mod exterior;
pub mod functionals;
pub mod identities;
pub mod parallel;
pub mod residue;
pub mod scalar;
pub mod suites;
pub mod symbol;

pub use error::{Error, Result};
