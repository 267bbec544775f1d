use num_complex::Complex;

use crate::geometry::Shape;
use crate::linalg::Vector;
use crate::real::{unit_ball_volume, Real};
use crate::spectral::bessel::bessel_lambda;

/// Î_D(ξ) = ∫_D e^{-2πi x·ξ} dx. Real for the centrally symmetric shapes supported.
pub fn fourier_indicator<T: Real>(shape: &Shape<T>, xi: &Vector<T>) -> Complex<T> {
    Complex::new(fourier_indicator_real(shape, xi), T::zero())
}

pub(crate) fn fourier_indicator_real<T: Real>(shape: &Shape<T>, xi: &Vector<T>) -> T {
    let d = shape.dim();
    assert_eq!(xi.dim(), d, "frequency has the wrong dimension");
    match shape {
        Shape::Ball { radius, .. } => ball_transform(d, *radius, xi.norm()),
        Shape::Box { half_extents } => {
            (0..d).map(|i| sinc_factor(half_extents[i], xi[i])).fold(T::one(), |p, f| p * f)
        }
        Shape::Ellipsoid { semi_axes } => {
            let jac = semi_axes.as_slice().iter().fold(T::one(), |p, &s| p * s);
            jac * ball_transform(d, T::one(), xi.hadamard(semi_axes).norm())
        }
    }
}

/// Transform of the ball of radius `radius` at frequency magnitude `rho`,
/// `κ_d R^d Λ_{d/2}(2πRρ)`.
pub(crate) fn ball_transform<T: Real>(d: usize, radius: T, rho: T) -> T {
    let nu = T::from_usize_lossy(d) * T::lit(0.5);
    unit_ball_volume::<T>(d) * radius.powi(d as i32) * bessel_lambda(nu, T::lit(2.0) * T::PI() * radius * rho)
}

/// `∫_{-a}^{a} e^{-2πi x ξ} dx = sin(2πaξ) / (πξ)`.
pub(crate) fn sinc_factor<T: Real>(a: T, xi: T) -> T {
    let x = T::lit(2.0) * T::PI() * a * xi;
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        (a + a) * (T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0))
    } else {
        x.sin() / (T::PI() * xi)
    }
}
