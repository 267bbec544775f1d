use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{random_rotation, Rotation, Shape};
use crate::lattice::Lattice;
use crate::linalg::Vector;
use crate::real::Real;
use crate::rng::stream_rng;
use crate::variance::estimate::{mean_count, Evaluation, Route, VarianceEstimate};

/// Number of independent random streams a Monte Carlo run is split into.
///
/// Stream `k` handles samples `⌊nk/S⌋ .. ⌊n(k+1)/S⌋` and is seeded by
/// [`stream_rng`]`(seed, k)`; partial moments are merged in stream order, so
/// results do not depend on the thread count.
pub const MC_STREAMS: u64 = 64;

/// Output of [`monte_carlo`]: the variance estimate plus the sample mean of
/// the counts with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloSummary<T> {
    pub variance: VarianceEstimate<T>,
    pub mean_count: T,
    pub mean_se: T,
}

/// Mean of `(N − α λ(rD))²` over `n` placements; `uncertainty` is the
/// standard error of the squared deviations.
pub fn variance_mc<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    isotropic: bool,
    n: u64,
    seed: u64,
) -> Result<VarianceEstimate<T>> {
    Ok(monte_carlo(lat, shape, r, isotropic, n, seed)?.variance)
}

/// Counts over `n` random placements: shift uniform on the fundamental cell
/// and, when `isotropic`, a Haar rotation.
pub fn monte_carlo<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    isotropic: bool,
    n: u64,
    seed: u64,
) -> Result<MonteCarloSummary<T>> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("at least 100 samples are required, got {n}")));
    }
    if shape.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), found: shape.dim() });
    }
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::InvalidInput(format!("dilation must be positive and finite, got {}", r)));
    }
    let d = lat.dim();
    let expected = mean_count(lat, shape, r).to_f64_lossy();
    let parts: Vec<Result<(Moments, Moments)>> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let (lo, hi) = (n * k / MC_STREAMS, n * (k + 1) / MC_STREAMS);
            let mut counts = Moments::default();
            let mut squares = Moments::default();
            let identity = Rotation::identity(d);
            for _ in lo..hi {
                let x: Vector<T> = lat.sample_fundamental_cell(&mut rng);
                let c = if isotropic && d > 1 {
                    let m = random_rotation(d, &mut rng);
                    lat.count_points(shape, r, &m, &x)?
                } else {
                    lat.count_points(shape, r, &identity, &x)?
                } as f64;
                counts.push(c);
                squares.push((c - expected) * (c - expected));
            }
            Ok((counts, squares))
        })
        .collect();
    let mut counts = Moments::default();
    let mut squares = Moments::default();
    for p in parts {
        let (c, s) = p?;
        counts.merge(&c);
        squares.merge(&s);
    }
    let variance = VarianceEstimate {
        value: T::lit(squares.mean),
        route: Route::MonteCarlo,
        evaluation: Evaluation::None,
        uncertainty: T::lit(squares.standard_error()),
        truncation_radius: None,
        samples: Some(n),
    };
    Ok(MonteCarloSummary { variance, mean_count: T::lit(counts.mean), mean_se: T::lit(counts.standard_error()) })
}

// Running mean and sum of squared deviations (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0.0 {
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n / n;
        self.m2 += other.m2 + delta * delta * self.n * other.n / n;
        self.n = n;
    }

    fn standard_error(&self) -> f64 {
        if self.n < 2.0 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.n - 1.0) / self.n).sqrt()
    }
}
