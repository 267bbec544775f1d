//! Bodies, rotations and covariograms.

mod covariogram;
mod rotation;
mod shape;

pub use covariogram::{covariogram, gamma_prime_zero, isotropic_covariogram};
pub use rotation::{random_rotation, Rotation};
pub use shape::Shape;
