use num_complex::Complex;

use crate::error::Result;
use crate::quadrature::{accelerated_series, GaussLegendre};
use crate::real::Real;
use crate::spectral::bessel::{bessel_lambda, bessel_zero, one_minus_bessel_lambda};
use crate::spectral::gamma::{complex_gamma, gamma};

fn kernel_constant<T: Real>(d: usize) -> T {
    let df = T::from_usize_lossy(d);
    T::PI().powf(T::lit(-1.5)) * gamma((df + T::one()) * T::lit(0.5)) / gamma(df * T::lit(0.5))
}

fn kernel_order<T: Real>(d: usize) -> T {
    T::from_usize_lossy(d) * T::lit(0.5) - T::one()
}

/// L(u) = π^{-3/2} Γ((d+1)/2)/Γ(d/2) · (1 - Γ(d/2) J_{d/2-1}(2πu) / (πu)^{d/2-1}).
pub fn kernel_l<T: Real>(u: T, d: usize) -> T {
    let x = T::lit(2.0) * T::PI() * u.abs();
    kernel_constant::<T>(d) * one_minus_bessel_lambda(kernel_order::<T>(d), x)
}

/// K̂₁(τ) = 1 / (1 + 2πiτ).
pub fn k1hat<T: Real>(tau: T) -> Complex<T> {
    Complex::new(T::one(), T::lit(2.0) * T::PI() * tau).inv()
}

/// Closed form of K̂₂(τ) = ∫_0^∞ u^{-2+2πiτ} L(u) du:
/// π^{-2πiτ-1/2} / (1 - 2πiτ) · Γ((d+1)/2) Γ(1/2 + πiτ) / Γ((d+1)/2 - πiτ).
pub fn k2hat_closed<T: Real>(tau: T, d: usize) -> Result<Complex<T>> {
    let pi = T::PI();
    let half = T::lit(0.5);
    let a = (T::from_usize_lossy(d) + T::one()) * half;
    let g1 = complex_gamma(Complex::new(half, pi * tau))?;
    let g2 = complex_gamma(Complex::new(a, -pi * tau))?;
    // π^{-1/2 - 2πiτ} = exp((-1/2 - 2πiτ) ln π)
    let power = (Complex::new(-half, -T::lit(2.0) * pi * tau) * pi.ln()).exp();
    let denom = Complex::new(T::one(), -T::lit(2.0) * pi * tau);
    Ok(power / denom * gamma(a) * g1 / g2)
}

/// K̂₂(τ) by quadrature of its defining integral.
///
/// On `[0, 1]` the substitution `u = e^{-s}` turns the logarithmic oscillation
/// of `u^{2πiτ}` into a plain one; on `[1, ∞)` the non-oscillating part of `L`
/// is integrated exactly and the Bessel part is summed between consecutive
/// zeros with epsilon acceleration. Absolute accuracy about 1e-9.
pub fn k2hat_numeric<T: Real>(tau: T, d: usize) -> Result<Complex<T>> {
    let pi = T::PI();
    let two_pi = pi + pi;
    let c = kernel_constant::<T>(d);
    let nu = kernel_order::<T>(d);
    let omega = two_pi * tau;
    let rule = GaussLegendre::<T>::new(16);

    // ∫_0^1 u^{-2+iω} L(u) du = ∫_0^∞ e^{s} L(e^{-s}) e^{-iωs} ds
    let s_max = T::lit(50.0);
    let n_panels = (s_max * (T::one() + omega.abs() / two_pi) * T::lit(0.5)).ceil().to_usize().unwrap_or(1).max(50);
    let h = s_max / T::from_usize_lossy(n_panels);
    let mut near = Complex::new(T::zero(), T::zero());
    for k in 0..n_panels {
        let a = h * T::from_usize_lossy(k);
        near = near
            + rule.integrate_complex(a, a + h, |s| {
                let u = (-s).exp();
                let amp = s.exp() * c * one_minus_bessel_lambda(nu, two_pi * u);
                Complex::new(T::zero(), -omega * s).exp() * amp
            });
    }

    // ∫_1^∞ u^{-2+iω} du = 1 / (1 - iω)
    let smooth = Complex::new(T::one(), -omega).inv() * c;

    // ∫_1^∞ u^{-2+iω} Λ_ν(2πu) du between zeros of J_ν(2πu)
    let zero_at = |k: usize| bessel_zero(nu, k) / two_pi;
    let mut first = 1;
    while zero_at(first) <= T::one() {
        first += 1;
    }
    let osc_rule = GaussLegendre::<T>::new(12);
    let integrand = |u: T| {
        let phase = Complex::new(T::zero(), omega * u.ln()).exp();
        phase * (bessel_lambda(nu, two_pi * u) / (u * u))
    };
    let far = accelerated_series(T::lit(1e-11), 8, 4000, "K2 kernel transform", |k| {
        let (a, b) = if k == 0 { (T::one(), zero_at(first)) } else { (zero_at(first + k - 1), zero_at(first + k)) };
        osc_rule.integrate_complex(a, b, integrand)
    })?;

    Ok(near + smooth - far * c)
}
