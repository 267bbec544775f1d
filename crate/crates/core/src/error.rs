use std::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Lattice generator with `|det A| <= 1e-12`.
    SingularGenerator { determinant: f64 },
    /// An integer enumeration box would hold more candidates than allowed.
    OverflowGuard { candidates: f64, limit: f64 },
    /// Lattice sum exponent `s <= d`.
    DivergentExponent { exponent: f64, dim: usize },
    /// Gamma function evaluated at (or within 1e-12 of) a pole.
    PoleAt { re: f64, im: f64 },
    /// Radial profile decays too slowly for its Hankel transform.
    SlowDecay { tail_exponent: f64, dim: usize },
    /// Oscillatory quadrature or series acceleration did not settle.
    NonConvergence { what: &'static str, estimate: f64 },
    /// Spectral truncation could not reach the requested tolerance.
    TailBoundFailure { tail_bound: f64, tolerance: f64, radius: f64 },
    InvalidShape(String),
    DimensionMismatch { expected: usize, found: usize },
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularGenerator { determinant } => {
                write!(f, "singular generator (det = {determinant:e})")
            }
            Error::OverflowGuard { candidates, limit } => {
                write!(f, "enumeration box holds {candidates:e} candidates, limit {limit:e}")
            }
            Error::DivergentExponent { exponent, dim } => {
                write!(f, "lattice sum diverges for exponent {exponent} <= dimension {dim}")
            }
            Error::PoleAt { re, im } => write!(f, "gamma function pole at {re}{im:+}i"),
            Error::SlowDecay { tail_exponent, dim } => write!(
                f,
                "profile tail exponent {tail_exponent} too slow for a {dim}-dimensional Hankel transform"
            ),
            Error::NonConvergence { what, estimate } => {
                write!(f, "{what} did not converge (last estimate {estimate:e})")
            }
            Error::TailBoundFailure { tail_bound, tolerance, radius } => write!(
                f,
                "spectral tail bound {tail_bound:e} above tolerance {tolerance:e} at truncation radius {radius}"
            ),
            Error::InvalidShape(msg) => write!(f, "invalid shape: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    /// True for errors caused by bad inputs rather than numerical trouble.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::SingularGenerator { .. }
                | Error::InvalidShape(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidInput(_)
                | Error::SlowDecay { .. }
        )
    }
}
