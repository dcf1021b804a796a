//! Exact number types: rationals, real quadratic extensions and rational
//! matrices.

mod matrix;
mod quad;
mod rational;

pub use matrix::RatMatrix;
pub use quad::QuadExt;
pub use rational::Rational;
