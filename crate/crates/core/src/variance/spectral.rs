use crate::error::{Error, Result};
use crate::geometry::{covariogram, isotropic_covariogram, Rotation, Shape};
use crate::lattice::{epstein_sum, Lattice};
use crate::linalg::Vector;
use crate::real::{unit_ball_volume, Real};
use crate::special::erf;
use crate::spectral::fourier::{fourier_indicator_real, sinc_factor};
use crate::spectral::{mean_decay_coefficient, SpectralDensity};
use crate::variance::estimate::{Evaluation, VarianceEstimate};

/// Which side of the Poisson identity a variance is summed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summation {
    /// Lattice side while the difference body holds few lattice points, dual side otherwise.
    Auto,
    /// `α Σ_t γ_{rMD}(t) − (α λ(rD))²` over the lattice points in `2rD`.
    Lattice,
    /// Truncated dual sum with mean tail completion.
    Dual,
}

// Lattice-side sums are used up to this many points in the difference body.
pub(crate) const LATTICE_SUM_POINTS: f64 = 400.0;
// Largest number of dual points enumerated by the adaptive dual sums.
pub(crate) const DUAL_POINT_CAP: f64 = 4.0e6;

/// Placement variance of the count in `r M D + x`, `x` uniform on a cell.
///
/// Equals `α² Σ_{ξ≠0} |Î_{rMD}(ξ)|²` over the dual lattice. Boxes (and every
/// body in `d = 1`) are summed exactly through a Gaussian split; balls and
/// ellipsoids through [`Summation::Auto`].
pub fn variance_spectral<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    rotation: &Rotation<T>,
    tol: T,
) -> Result<VarianceEstimate<T>> {
    variance_spectral_with(lat, shape, r, rotation, tol, Summation::Auto)
}

/// [`variance_spectral`] with an explicit choice of summation for balls and
/// ellipsoids; boxes always use the Gaussian split.
pub fn variance_spectral_with<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    rotation: &Rotation<T>,
    tol: T,
    summation: Summation,
) -> Result<VarianceEstimate<T>> {
    check_inputs(lat, shape, r, tol)?;
    if rotation.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), found: rotation.dim() });
    }
    if let Some(Shape::Box { half_extents }) = shape.as_interval() {
        return gaussian_split(lat, &half_extents, r, rotation);
    }
    if let Shape::Box { half_extents } = shape {
        return gaussian_split(lat, half_extents, r, rotation);
    }
    let use_lattice = match summation {
        Summation::Auto => lattice_side_points(lat, shape, r) <= LATTICE_SUM_POINTS,
        Summation::Lattice => true,
        Summation::Dual => false,
    };
    if use_lattice {
        let m = *rotation.matrix();
        lattice_side(lat, shape, r, |t| covariogram(shape, &m.tr_mul_vec(t).scale(r.recip())))
    } else {
        let d = shape.dim();
        let r2d = r.powi(2 * d as i32);
        adaptive_dual(lat, shape, r, tol, |radius| {
            let pts = lat.dual_points_in_ball(radius)?;
            let mut partial = T::zero();
            let mut envelope = T::zero();
            let mut norms = Vec::with_capacity(pts.len());
            for xi in &pts {
                let u = rotation.apply_inverse(xi).scale(r);
                let f = fourier_indicator_real(shape, &u);
                let g = f * f;
                partial += g;
                let rho = r * xi.norm();
                envelope = envelope.max(rho.powi(d as i32 + 1) * g);
                norms.push(xi.norm_squared());
            }
            Ok((partial * r2d, envelope, norms))
        })
    }
}

/// Variance of the count in `r M D + x` averaged over uniform `x` and Haar `M`,
/// `α² Σ_{ξ≠0} γ̄̂_D(r|ξ|) r^{2d}`.
pub fn variance_isotropic<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T, tol: T) -> Result<VarianceEstimate<T>> {
    variance_isotropic_with(lat, shape, r, tol, Summation::Auto)
}

/// [`variance_isotropic`] with an explicit summation side.
pub fn variance_isotropic_with<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    tol: T,
    summation: Summation,
) -> Result<VarianceEstimate<T>> {
    check_inputs(lat, shape, r, tol)?;
    if let Some(Shape::Box { half_extents }) = shape.as_interval() {
        return gaussian_split(lat, &half_extents, r, &Rotation::identity(1));
    }
    let use_lattice = match summation {
        Summation::Auto => lattice_side_points(lat, shape, r) <= LATTICE_SUM_POINTS,
        Summation::Lattice => true,
        Summation::Dual => false,
    };
    if use_lattice {
        isotropic_lattice_side(lat, shape, r)
    } else {
        let density = SpectralDensity::new(shape.clone());
        let total = dual_epstein_total(lat)?;
        let d = shape.dim();
        adaptive_dual(lat, shape, r, tol, |radius| {
            let shells = DualShells::build(lat, radius, total)?;
            let (partial, envelope) = shells.evaluate(&density, r);
            Ok((partial * r.powi(2 * d as i32), envelope, Vec::new()))
        })
    }
}

fn check_inputs<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T, tol: T) -> Result<()> {
    if shape.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), found: shape.dim() });
    }
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::InvalidInput(format!("dilation must be positive and finite, got {}", r)));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", tol)));
    }
    Ok(())
}

// Expected number of lattice points in the ball of radius 2 r R_D.
pub(crate) fn lattice_side_points<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T) -> f64 {
    let d = shape.dim();
    let reach = (T::lit(2.0) * r * shape.bounding_radius()).to_f64_lossy();
    lat.intensity().to_f64_lossy() * unit_ball_volume::<f64>(d) * reach.powi(d as i32)
}

// α(λ(rD) + Σ_{t≠0} γ_{rD}(t)) − (α λ(rD))², with `unit_gamma(t)` returning
// γ_D of the argument after undoing the dilation (the r^d factor is applied here).
fn lattice_side<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    unit_gamma: impl Fn(&Vector<T>) -> T,
) -> Result<VarianceEstimate<T>> {
    let d = shape.dim();
    let reach = T::lit(2.0) * r * shape.bounding_radius();
    let pts = lat.points_in_ball(reach)?;
    let vol = shape.volume();
    let mut sum = T::zero();
    for t in pts.iter().rev() {
        sum += unit_gamma(t);
    }
    finish_lattice_side(lat, vol, sum, r, d, reach)
}

fn finish_lattice_side<T: Real>(lat: &Lattice<T>, vol: T, sum: T, r: T, d: usize, reach: T) -> Result<VarianceEstimate<T>> {
    let alpha = lat.intensity();
    let rd = r.powi(d as i32);
    let mean = alpha * rd * vol;
    let second = alpha * rd * (vol + sum);
    let value = second - mean * mean;
    // rounding in the cancelling difference
    let uncertainty = T::lit(64.0) * T::epsilon() * second.max(mean * mean);
    Ok(VarianceEstimate::spectral(value, Evaluation::LatticeSum, uncertainty, reach))
}

pub(crate) fn isotropic_lattice_side<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r: T) -> Result<VarianceEstimate<T>> {
    let d = shape.dim();
    let reach = T::lit(2.0) * r * shape.bounding_radius();
    let norms = lat.squared_norms(reach)?;
    let mut sum = T::zero();
    for (q, m) in group_norms(&norms).into_iter().rev() {
        sum += m * isotropic_covariogram(shape, q.sqrt() / r);
    }
    finish_lattice_side(lat, shape.volume(), sum, r, d, reach)
}

// Groups ascending squared norms into (squared norm, multiplicity).
pub(crate) fn group_norms<T: Real>(sorted: &[T]) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::new();
    let eps = T::lit(1e-12);
    for &q in sorted {
        match out.last_mut() {
            Some((q0, m)) if q - *q0 <= eps * q => *m += T::one(),
            _ => out.push((q, T::one())),
        }
    }
    out
}

pub(crate) fn dual_epstein_total<T: Real>(lat: &Lattice<T>) -> Result<T> {
    let d = lat.dim();
    Ok(epstein_sum(lat, T::from_usize_lossy(d + 1), T::lit(1e-14).max(T::epsilon()))?.value)
}

/// Dual lattice vectors `|ξ| <= R` grouped by norm, with the exact remainder
/// `Σ_{|ξ|>R} |ξ|^{-d-1}`.
pub(crate) struct DualShells<T> {
    pub norms: Vec<T>,
    pub multiplicity: Vec<T>,
    pub radius: T,
    pub tail: T,
    pub total: T,
    dim: usize,
}

impl<T: Real> DualShells<T> {
    pub fn build(lat: &Lattice<T>, radius: T, total: T) -> Result<Self> {
        let d = lat.dim();
        let grouped = group_norms(&lat.dual_squared_norms(radius)?);
        let p = -T::from_usize_lossy(d + 1);
        let mut norms = Vec::with_capacity(grouped.len());
        let mut multiplicity = Vec::with_capacity(grouped.len());
        let mut inner = T::zero();
        for (q, m) in grouped {
            let n = q.sqrt();
            inner += m * n.powf(p);
            norms.push(n);
            multiplicity.push(m);
        }
        let tail = (total - inner).max(T::zero());
        Ok(DualShells { norms, multiplicity, radius, tail, total, dim: d })
    }

    /// `Σ m γ̄̂(r|ξ|)` over the shells and the envelope `max (r|ξ|)^{d+1} γ̄̂(r|ξ|)`.
    pub fn evaluate(&self, density: &SpectralDensity<T>, r: T) -> (T, T) {
        let mut partial = T::zero();
        let mut envelope = T::zero();
        for (&n, &m) in self.norms.iter().zip(&self.multiplicity) {
            let rho = r * n;
            let g = density.value(rho);
            partial += m * g;
            envelope = envelope.max(rho.powi(self.dim as i32 + 1) * g);
        }
        (partial, envelope)
    }
}

// Grows the dual radius until the completion bound meets `tol`. `eval(R)`
// returns (Σ_{|ξ|<=R} term/α², envelope, squared norms if not grouped).
fn adaptive_dual<T: Real>(
    lat: &Lattice<T>,
    shape: &Shape<T>,
    r: T,
    tol: T,
    mut eval: impl FnMut(T) -> Result<(T, T, Vec<T>)>,
) -> Result<VarianceEstimate<T>> {
    let d = shape.dim();
    let alpha = lat.intensity();
    let a2 = alpha * alpha;
    let cbar = mean_decay_coefficient(shape);
    let total = dual_epstein_total(lat)?;
    let p = -T::from_usize_lossy(d + 1);
    let spacing = alpha.powf(T::one() / T::from_usize_lossy(d));
    let mut radius = (T::lit(8.0) * spacing).max(T::lit(8.0) / (r * shape.bounding_radius()));
    let scale = a2 * r.powi(d as i32 - 1);
    loop {
        let (partial, envelope, norms) = eval(radius)?;
        let tail = if norms.is_empty() {
            DualShells::build(lat, radius, total)?.tail
        } else {
            let inner: T = norms.iter().map(|&q| q.sqrt().powf(p)).sum();
            (total - inner).max(T::zero())
        };
        let value = a2 * partial + scale * cbar * tail;
        let bound = scale * (envelope - cbar).max(cbar) * tail;
        if bound <= tol {
            return Ok(VarianceEstimate::spectral(value, Evaluation::DualSum, bound, radius));
        }
        let next = radius * (bound / tol * T::lit(1.1)).min(T::lit(8.0)).max(T::lit(1.5));
        let points = unit_ball_volume::<f64>(d) * next.to_f64_lossy().powi(d as i32) / alpha.to_f64_lossy();
        if points > DUAL_POINT_CAP {
            return Err(Error::TailBoundFailure {
                tail_bound: bound.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
                radius: radius.to_f64_lossy(),
            });
        }
        radius = next;
    }
}

// Box `r M [-a, a]`: α² Σ_{ξ≠0} |Î|² e^{-πσ²|ξ|²} + α Σ_t (γ − γ∗g_σ)(t), with
// g_σ the Gaussian whose transform is e^{-πσ²|ξ|²}. Both sums converge like
// Gaussians; the covariogram and its smoothed version factor over box axes.
fn gaussian_split<T: Real>(lat: &Lattice<T>, half: &Vector<T>, r: T, rotation: &Rotation<T>) -> Result<VarianceEstimate<T>> {
    let d = lat.dim();
    let pi = T::PI();
    let alpha = lat.intensity();
    let b = half.scale(r);
    let vol = b.as_slice().iter().fold(T::one(), |p, &x| p * (x + x));
    let sigma = lat.determinant().powf(T::one() / T::from_usize_lossy(d));
    let s = sigma / (T::lit(2.0) * pi).sqrt();

    let x = T::lit(46.0) + T::lit(2.0) * (T::one() + vol * alpha).ln();
    let cutoff = (x / (pi * sigma * sigma)).sqrt();
    let freqs = lat.dual_points_in_ball(cutoff)?;
    let mut freq = T::zero();
    for xi in freqs.iter().rev() {
        let u = rotation.apply_inverse(xi);
        let f = (0..d).fold(T::one(), |p, i| p * sinc_factor(b[i], u[i]));
        freq += f * f * (-pi * sigma * sigma * xi.norm_squared()).exp();
    }

    let reach = b.map(|x| T::lit(2.0) * x + T::lit(9.0) * s).norm();
    let mut pts = lat.points_in_ball(reach)?;
    pts.push(Vector::zeros(d));
    let mut real = T::zero();
    for t in pts.iter().rev() {
        let u = rotation.apply_inverse(t);
        let mut exact = T::one();
        let mut smooth = T::one();
        for i in 0..d {
            exact *= (T::lit(2.0) * b[i] - u[i].abs()).max(T::zero());
            smooth *= smoothed_tent(u[i], b[i], s);
        }
        real += exact - smooth;
    }
    let value = alpha * alpha * freq + alpha * real;
    let omitted = alpha * alpha * vol * vol * (-x).exp() * T::from_usize_lossy(freqs.len() + 1);
    let uncertainty = omitted + T::lit(64.0) * T::epsilon() * alpha * vol * T::from_usize_lossy(pts.len());
    Ok(VarianceEstimate::spectral(value, Evaluation::GaussianSplit, uncertainty, cutoff))
}

// (2b − |u|)₊ convolved with the centred normal density of standard deviation s.
fn smoothed_tent<T: Real>(u: T, b: T, s: T) -> T {
    let two_b = b + b;
    T::lit(0.5) * (smoothed_abs(u - two_b, s) + smoothed_abs(u + two_b, s)) - smoothed_abs(u, s)
}

// E|u + sZ| for standard normal Z.
fn smoothed_abs<T: Real>(u: T, s: T) -> T {
    let z = u / (s * T::SQRT_2());
    s * (T::lit(2.0) / T::PI()).sqrt() * (-z * z).exp() + u * erf(z)
}
