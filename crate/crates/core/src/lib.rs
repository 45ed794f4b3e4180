//! Chebyshev polynomials, capacities and Widom factors for compact sets that
//! arise as polynomial preimages of intervals: stars, quadratic preimages,
//! circular arcs, spiked circles and general polynomial trees.
//!
//! Several routes compute the same quantity independently (exact
//! composition, weighted Remez on `[-1, 1]`, a certified discrete complex
//! minimax solver, Gamma-function closed forms), which lets the test suite
//! cross-check them against each other.

pub mod cheb_complex;
pub mod cheb_real;
pub mod error;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod sets;
pub mod special;
pub mod widom;

pub use error::{Error, Result};
pub use num_complex::Complex64;
