//! Variance of the number of lattice points in a randomly placed, dilated body.
//!
//! Three routes are provided and checked against each other: exact sums over
//! the dual lattice, Monte Carlo enumeration over random placements, and the
//! asymptotic law `C_T · H^{d-1}(∂D) · Φ(r) · r^{d-1}`.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

pub mod error;
pub mod geometry;
pub mod lattice;
pub mod linalg;
pub mod quadrature;
pub mod real;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod variance;

pub use error::{Error, Result};
pub use real::Real;

pub type Shape64 = geometry::Shape<f64>;
pub type Rotation64 = geometry::Rotation<f64>;
pub type Vector64 = linalg::Vector<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type Lattice64 = lattice::Lattice<f64>;
