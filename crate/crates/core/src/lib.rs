//! Quadratic Weyl sums with rational parameters.
//!
//! The crate computes the orbits of the theta group on rational points of
//! the torus, the constants governing the R^-4 tail of
//! |S_N(x; alpha, beta)|^2 / N, the Jacobi theta function on the Jacobi
//! group, and Monte-Carlo estimates of the tails.

pub mod arith;
pub mod constants;
pub mod error;
pub mod homog;
pub mod numerics;
pub mod orbits;
pub mod tailsim;
pub mod theta;
pub mod thetagroup;
pub mod weight;
pub mod weylsum;

pub use arith::{normalize_pair, PairKind, RationalPair};
pub use error::{Error, Result};
pub use orbits::{OrbitData, OrbitSizes, Representative};
pub use thetagroup::{GroupElement, IwasawaPoint, Mat2};
