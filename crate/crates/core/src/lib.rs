//! Exact-arithmetic toolkit for the unit-distance problem in R^3.
//!
//! The crate builds the objects that appear in incidence arguments for unit
//! distances as exact computations: circles cut from pairs of unit spheres,
//! the double-sphere duality in R^6, the slope lift of circles to R^4 with
//! depth-cycle and pseudo-segment checks, exact unit-distance counting, and
//! the min-max exponent program whose optimum is `295/197`.
//!
//! Everything is rational (or lives in a real quadratic extension of the
//! rationals); no predicate ever rounds.

pub mod error;
pub mod dual6;
pub mod exact;
pub mod exponents;
pub mod families;
pub mod geometry;
pub mod incidence;
pub mod liftcut;
pub mod rng;

pub use error::{Error, Result};
