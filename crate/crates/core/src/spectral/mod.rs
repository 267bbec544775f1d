//! Special functions, Fourier and Hankel transforms, spectral densities and
//! the Tauberian kernels.

pub mod bessel;
mod density;
pub(crate) mod fourier;
pub mod gamma;
mod hankel;
mod kernels;
mod profile;

pub use bessel::{bessel_j, bessel_lambda, bessel_zero, one_minus_bessel_lambda};
pub use density::{mean_decay_coefficient, spectral_density, DensityMode, SpectralDensity};
pub use fourier::fourier_indicator;
pub use gamma::{complex_gamma, gamma};
pub use hankel::{hankel_transform, hankel_transform_compact};
pub use kernels::{k1hat, k2hat_closed, k2hat_numeric, kernel_l};
pub use profile::{Interpolation, RadialProfile};
