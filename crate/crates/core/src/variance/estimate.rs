use crate::error::Result;
use crate::geometry::Shape;
use crate::lattice::{lattice_constant, Lattice};
use crate::real::Real;

/// Which of the three routes produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Spectral,
    MonteCarlo,
    Asymptotic,
}

/// How a spectral-route value was summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    /// Dual sum damped by a Gaussian plus its exact real-space correction (boxes).
    GaussianSplit,
    /// The equivalent finite sum of covariogram values over lattice points.
    LatticeSum,
    /// Truncated dual sum with the tail replaced by its mean decay.
    DualSum,
    /// Not a spectral evaluation.
    None,
}

/// A variance value with its uncertainty.
///
/// `uncertainty` is a bound on the truncation error for the spectral route,
/// the standard error for Monte Carlo, and 0 for the asymptote.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceEstimate<T> {
    pub value: T,
    pub route: Route,
    pub evaluation: Evaluation,
    pub uncertainty: T,
    /// Dual (or real-space) truncation radius of a spectral evaluation.
    pub truncation_radius: Option<T>,
    /// Number of placements of a Monte Carlo estimate.
    pub samples: Option<u64>,
}

impl<T: Real> VarianceEstimate<T> {
    pub(crate) fn spectral(value: T, evaluation: Evaluation, uncertainty: T, radius: T) -> Self {
        VarianceEstimate {
            value: value.max(T::zero()),
            route: Route::Spectral,
            evaluation,
            uncertainty,
            truncation_radius: Some(radius),
            samples: None,
        }
    }
}

/// Expected count `α λ^d(rD) = α r^d λ^d(D)`.
pub fn mean_count<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T) -> T {
    lat.intensity() * r.powi(shape.dim() as i32) * shape.volume()
}

/// Prediction of the asymptotic law with `Φ ≡ 1`: `C_T H^{d-1}(∂D) r^{d-1}`.
pub fn asymptote<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T) -> Result<VarianceEstimate<T>> {
    let c = lattice_constant(lat, T::lit(1e-13).max(T::epsilon()))?.value;
    Ok(asymptote_with_constant(c, shape, r))
}

pub(crate) fn asymptote_with_constant<T: Real>(c_t: T, shape: &Shape<T>, r: T) -> VarianceEstimate<T> {
    let value = c_t * shape.surface_measure() * r.powi(shape.dim() as i32 - 1);
    VarianceEstimate {
        value,
        route: Route::Asymptotic,
        evaluation: Evaluation::None,
        uncertainty: T::zero(),
        truncation_radius: None,
        samples: None,
    }
}
