//! Placement variance by spectral sums, Monte Carlo and the asymptotic law,
//! plus the Φ and Ψ profiles.

mod estimate;
mod monte_carlo;
mod phi;
mod spectral;

pub use estimate::{asymptote, mean_count, Evaluation, Route, VarianceEstimate};
pub use monte_carlo::{monte_carlo, variance_mc, MonteCarloSummary, MC_STREAMS};
pub use phi::{cesaro_mean, phi_profile, psi_profile, PhiProfile};
pub use spectral::{variance_isotropic, variance_isotropic_with, variance_spectral, variance_spectral_with, Summation};
