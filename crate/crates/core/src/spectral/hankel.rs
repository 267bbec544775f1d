use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{accelerated_series, GaussLegendre};
use crate::real::{unit_sphere_area, Real};
use crate::spectral::bessel::{bessel_lambda, bessel_zero};
use crate::spectral::profile::RadialProfile;

/// d-dimensional Fourier transform of a radial function,
/// `2π ρ^{1-d/2} ∫_0^∞ r^{d/2} J_{d/2-1}(2πρr) f(r) dr`.
///
/// The sampled range is integrated panel by panel (Gauss–Legendre, panels no
/// longer than half a kernel oscillation); a nonzero power-law tail is summed
/// between consecutive zeros of the Bessel kernel with epsilon acceleration.
/// Fails with [`Error::SlowDecay`] unless the tail exponent is below `-d`.
pub fn hankel_transform<T: Real>(f: &RadialProfile<T>, rho: T, d: usize) -> Result<T> {
    let p = f.tail_exponent();
    let df = T::from_usize_lossy(d);
    if !(p < -df) {
        return Err(Error::SlowDecay { tail_exponent: p.to_f64_lossy(), dim: d });
    }
    let rho = rho.abs();
    let nu = df * T::lit(0.5) - T::one();
    let area = unit_sphere_area::<T>(d);
    let two_pi_rho = T::lit(2.0) * T::PI() * rho;
    let kernel = |r: T| area * r.powi(d as i32 - 1) * bessel_lambda(nu, two_pi_rho * r);
    let rule = GaussLegendre::<T>::new(8);

    let t = f.abscissae();
    let mut body = T::zero();
    if t[0] > T::zero() {
        // constant extension below the first sample
        body += sub_panels(&rule, T::zero(), t[0], rho, |r| kernel(r) * f.eval(r));
    }
    for w in t.windows(2) {
        body += sub_panels(&rule, w[0], w[1], rho, |r| kernel(r) * f.eval(r));
    }

    let c = f.tail_coefficient();
    if c == T::zero() {
        return Ok(body);
    }
    let start = f.last_abscissa();
    if rho == T::zero() {
        // ∫_T^∞ dκ_d r^{d-1} c r^p dr
        return Ok(body - area * c * start.powf(p + df) / (p + df));
    }
    let tail_fn = |r: T| kernel(r) * c * r.powf(p);
    let zero_at = |k: usize| bessel_zero(nu, k) / two_pi_rho;
    let mut first = 1;
    // skip zeros below the tail start; locate quickly by the asymptotic spacing
    let guess = (two_pi_rho * start / T::PI()).to_usize().unwrap_or(0).saturating_sub(2);
    first = first.max(guess.max(1));
    while zero_at(first) <= start {
        first += 1;
    }
    while first > 1 && zero_at(first - 1) > start {
        first -= 1;
    }
    let seg_rule = GaussLegendre::<T>::new(12);
    let scale = f.values().iter().fold(T::zero(), |m, &v| m.max(v.abs())).max(T::min_positive_value());
    let tail = accelerated_series(scale * T::lit(1e-12), 6, 20_000, "Hankel tail", |k| {
        let (a, b) = if k == 0 { (start, zero_at(first)) } else { (zero_at(first + k - 1), zero_at(first + k)) };
        Complex::new(seg_rule.integrate(a, b, tail_fn), T::zero())
    })?;
    Ok(body + tail.re)
}

/// Hankel transform of a function given as a closure supported on `[0, support]`,
/// with known kinks in `breaks`.
pub fn hankel_transform_compact<T: Real>(f: impl Fn(T) -> T, support: T, breaks: &[T], rho: T, d: usize) -> T {
    let nu = T::from_usize_lossy(d) * T::lit(0.5) - T::one();
    let area = unit_sphere_area::<T>(d);
    let two_pi_rho = T::lit(2.0) * T::PI() * rho.abs();
    let rule = GaussLegendre::<T>::new(8);
    let mut pts: Vec<T> = breaks.iter().copied().filter(|&b| b > T::zero() && b < support).collect();
    pts.push(T::zero());
    pts.push(support);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = T::zero();
    for w in pts.windows(2) {
        // at least 16 panels per smooth piece
        let pieces = 16;
        let h = (w[1] - w[0]) / T::from_usize_lossy(pieces);
        for k in 0..pieces {
            let a = w[0] + h * T::from_usize_lossy(k);
            total += sub_panels(&rule, a, a + h, rho.abs(), |r| {
                area * r.powi(d as i32 - 1) * bessel_lambda(nu, two_pi_rho * r) * f(r)
            });
        }
    }
    total
}

// Integrates over [a, b] with panels no longer than 1 / (2ρ).
fn sub_panels<T: Real>(rule: &GaussLegendre<T>, a: T, b: T, rho: T, mut f: impl FnMut(T) -> T) -> T {
    let n = ((b - a) * rho * T::lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
    let h = (b - a) / T::from_usize_lossy(n);
    let mut total = T::zero();
    for k in 0..n {
        let lo = a + h * T::from_usize_lossy(k);
        let hi = if k + 1 == n { b } else { lo + h };
        total += rule.integrate(lo, hi, &mut f);
    }
    total
}
