//! Algebra and search kernels for analyzing almost perfect nonlinear (APN)
//! functions over binary fields through their associated surface polynomial
//!
//! ```text
//! phi(x,y,z) = (f(x) + f(y) + f(z) + f(x+y+z)) / ((x+y)(x+z)(y+z))
//! ```
//!
//! The crate provides:
//!
//! * [`field`] — arithmetic in GF(2^n) for 1 <= n <= 32, subfield embeddings,
//!   Frobenius.
//! * [`unipoly`] — dense univariate polynomials over GF(2^n) with full
//!   factorization.
//! * [`tripoly`] — sparse trivariate polynomials, exact division, homogeneous
//!   decomposition.
//! * [`phi`] — construction of the surface polynomial and its per-monomial
//!   pieces.
//! * [`factor`] — bivariate factorization, absolute irreducibility, and the
//!   Kasami-degree factor structure.
//! * [`apn`] — exhaustive differential-uniformity and surface point scans.
//! * [`classify`] — rule checks deciding when a polynomial cannot be APN for
//!   all large extensions.
//! * [`verify`] — the reproduction battery behind the `verify-paper` CLI
//!   subcommand.

pub mod apn;
pub mod classify;
mod error;
pub mod factor;
pub mod field;
pub mod phi;
pub mod rng;
pub mod tripoly;
pub mod unipoly;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use tripoly::{Monomial, TriPoly, Var};
pub use unipoly::UniPoly;
