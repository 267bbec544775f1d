use rayon::prelude::*;

use crate::geometry::{gamma_prime_zero, Shape};
use crate::linalg::Vector;
use crate::quadrature::GaussLegendre;
use crate::real::{unit_ball_volume, Real};
use crate::spectral::fourier::{ball_transform, fourier_indicator_real};
use crate::spectral::profile::{Interpolation, RadialProfile};

/// How a [`SpectralDensity`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Balls and all one-dimensional shapes.
    ClosedForm,
    /// Boxes and ellipsoids in `d >= 2`: direction average by quadrature.
    SphereQuadrature,
}

/// γ̄̂_D(ρ), the average of `|Î_D(ρu)|²` over unit vectors `u`.
#[derive(Clone)]
pub struct SpectralDensity<T> {
    shape: Shape<T>,
    mode: DensityMode,
    table: Option<RadialProfile<T>>,
}

impl<T: Real> SpectralDensity<T> {
    pub fn new(shape: Shape<T>) -> Self {
        let mode = if shape.is_rotation_invariant() { DensityMode::ClosedForm } else { DensityMode::SphereQuadrature };
        SpectralDensity { shape, mode, table: None }
    }

    /// Density backed by a cubic-spline table on `[0, rho_max]` with spacing
    /// `step` (quadrature mode only; closed forms are never tabulated).
    /// Beyond the table the tail `c ρ^{-d-1}` uses the mean of `ρ^{d+1} γ̄̂`
    /// over the upper half of the table.
    pub fn tabulated(shape: Shape<T>, rho_max: T, step: T) -> Self {
        let mut density = Self::new(shape);
        if density.mode == DensityMode::SphereQuadrature {
            let n = (rho_max / step).ceil().to_usize().unwrap_or(1).max(4);
            let grid: Vec<T> = (0..=n).map(|i| rho_max * T::from_usize_lossy(i) / T::from_usize_lossy(n)).collect();
            let values: Vec<T> = grid.par_iter().map(|&rho| sphere_average(&density.shape, rho)).collect();
            let p = -T::from_usize_lossy(density.shape.dim() + 1);
            let profile = RadialProfile::with_interpolation(grid, values, p, Interpolation::CubicSpline)
                .expect("valid grid")
                .fit_mean_tail(rho_max * T::lit(0.5));
            density.table = Some(profile);
        }
        density
    }

    pub fn shape(&self) -> &Shape<T> {
        &self.shape
    }

    pub fn mode(&self) -> DensityMode {
        self.mode
    }

    pub fn table(&self) -> Option<&RadialProfile<T>> {
        self.table.as_ref()
    }

    /// γ̄̂_D(ρ).
    pub fn value(&self, rho: T) -> T {
        let rho = rho.abs();
        match self.mode {
            DensityMode::ClosedForm => {
                let v = match &self.shape {
                    Shape::Ball { dim, radius } => ball_transform(*dim, *radius, rho),
                    s => fourier_indicator_real(s, &Vector::from_slice(&[rho])),
                };
                v * v
            }
            DensityMode::SphereQuadrature => match &self.table {
                Some(t) if rho <= t.last_abscissa() => t.eval(rho).max(T::zero()),
                _ => sphere_average(&self.shape, rho),
            },
        }
    }
}

impl<T: Real> std::fmt::Debug for SpectralDensity<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralDensity")
            .field("shape", &self.shape)
            .field("mode", &self.mode)
            .field("tabulated", &self.table.is_some())
            .finish()
    }
}

/// γ̄̂_D(ρ) for a single frequency.
pub fn spectral_density<T: Real>(shape: &Shape<T>, rho: T) -> T {
    SpectralDensity::new(shape.clone()).value(rho)
}

/// Cesàro mean of `ρ^{d+1} γ̄̂_D(ρ)`, `H^{d-1}(∂D) / (2π² d κ_d)`, equal to
/// `-γ̄'(0) / (2π² κ_{d-1})`.
pub fn mean_decay_coefficient<T: Real>(shape: &Shape<T>) -> T {
    let d = shape.dim();
    -gamma_prime_zero(shape) / (T::lit(2.0) * T::PI() * T::PI() * unit_ball_volume::<T>(d - 1))
}

// Direction average of |Î_D(ρu)|² over one octant (the shapes are symmetric
// under coordinate reflections), doubling the panel count until two
// successive estimates agree to 1e-8 relative.
fn sphere_average<T: Real>(shape: &Shape<T>, rho: T) -> T {
    let d = shape.dim();
    if rho == T::zero() {
        let v = shape.volume();
        return v * v;
    }
    let size = match shape {
        Shape::Box { half_extents } => half_extents.as_slice().iter().fold(T::zero(), |m, &a| m.max(a)),
        _ => shape.bounding_radius(),
    };
    let rule = GaussLegendre::<T>::new(8);
    let half_pi = T::FRAC_PI_2();
    let sq = |xi: Vector<T>| {
        let v = fourier_indicator_real(shape, &xi);
        v * v
    };
    // a square is symmetric about the diagonal, so half the quadrant suffices
    let square = match shape {
        Shape::Box { half_extents } if d == 2 && half_extents[0] == half_extents[1] => Some(half_extents[0]),
        _ => None,
    };
    let planar = |n: usize, rho: T| -> T {
        match square {
            Some(a) => {
                let w = T::lit(2.0) * T::PI() * a * rho;
                let quarter = T::FRAC_PI_4();
                panels(&rule, T::zero(), quarter, (n + 1) / 2, |th| {
                    let (s, c) = th.sin_cos();
                    let f = sinc_product(w, c) * sinc_product(w, s);
                    f * f
                }) / quarter
                    * (a + a).powi(4)
            }
            None => {
                panels(&rule, T::zero(), half_pi, n, |th| {
                    let (s, c) = th.sin_cos();
                    sq(Vector::from_slice(&[rho * c, rho * s]))
                }) / half_pi
            }
        }
    };
    let estimate = |n: usize| -> T {
        if d == 2 {
            planar(n, rho)
        } else {
            panels(&rule, T::zero(), T::one(), n, |z| {
                let rz = rho * (T::one() - z * z).max(T::zero()).sqrt();
                panels(&rule, T::zero(), half_pi, n, |ph| {
                    let (s, c) = ph.sin_cos();
                    sq(Vector::from_slice(&[rz * c, rz * s, rho * z]))
                }) / half_pi
            })
        }
    };
    let mut n = (T::lit(2.0) * T::PI() * size * rho).ceil().to_usize().unwrap_or(1) + 2;
    let mut prev = estimate(n);
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(100.0));
    for _ in 0..6 {
        n *= 2;
        let next = estimate(n);
        if (next - prev).abs() <= tol * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

// sin(w u) / (w u), the normalized one-axis box factor.
fn sinc_product<T: Real>(w: T, u: T) -> T {
    let x = w * u;
    if x.abs() < T::lit(1e-4) {
        T::one() - x * x / T::lit(6.0)
    } else {
        x.sin() / x
    }
}

fn panels<T: Real>(rule: &GaussLegendre<T>, a: T, b: T, n: usize, mut f: impl FnMut(T) -> T) -> T {
    let h = (b - a) / T::from_usize_lossy(n);
    (0..n)
        .map(|k| {
            let lo = a + h * T::from_usize_lossy(k);
            rule.integrate(lo, lo + h, &mut f)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn ball_is_squared_transform() {
        let b = Shape::ball(3, 1.0f64).unwrap();
        for &rho in &[0.0, 0.3, 1.0, 7.5] {
            let v = fourier_indicator_real(&b, &Vector::from_slice(&[rho, 0.0, 0.0]));
            assert!((spectral_density(&b, rho) - v * v).abs() < 1e-15);
        }
        assert!((spectral_density(&b, 1e-9) - b.volume().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn square_half_quadrant_matches_full_quadrant() {
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        let rule = GaussLegendre::<f64>::new(8);
        for &rho in &[0.7, 13.3, 151.2] {
            let n = (8.0 * rho) as usize + 8;
            let full = panels(&rule, 0.0, PI / 2.0, n, |th| {
                fourier_indicator_real(&sq, &Vector::from_slice(&[rho * th.cos(), rho * th.sin()])).powi(2)
            }) / (PI / 2.0);
            let fast = spectral_density(&sq, rho);
            assert!((fast - full).abs() <= 1e-8 * full, "{rho}: {fast} {full}");
        }
    }

    #[test]
    fn square_density_matches_monte_carlo_directions() {
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        let rho = 2.0;
        let mut rng = stream_rng(17, 0);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let th: f64 = rng.gen_range(0.0..2.0 * PI);
            let v = fourier_indicator_real(&sq, &Vector::from_slice(&[rho * th.cos(), rho * th.sin()])).powi(2);
            s += v;
            s2 += v * v;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        let q = spectral_density(&sq, rho);
        assert!((q - mean).abs() < 3.0 * se, "{q} vs {mean} ± {se}");
    }

    #[test]
    fn box_quadrature_against_fine_midpoint() {
        let bx = Shape::cuboid(&[0.5f64, 0.3]).unwrap();
        for &rho in &[0.7, 5.0, 40.0] {
            let n = 400_000;
            let oracle: f64 = (0..n)
                .map(|k| {
                    let th = (k as f64 + 0.5) * 2.0 * PI / n as f64;
                    fourier_indicator_real(&bx, &Vector::from_slice(&[rho * th.cos(), rho * th.sin()])).powi(2)
                })
                .sum::<f64>()
                / n as f64;
            let v = spectral_density(&bx, rho);
            assert!(((v - oracle) / oracle).abs() < 1e-8, "rho {rho}: {v} vs {oracle}");
        }
    }

    #[test]
    fn ellipsoid_and_cube_in_three_dimensions() {
        // a sphere written as an ellipsoid must reproduce the closed form
        let e = Shape::ellipsoid(&[0.8f64, 0.8, 0.8]).unwrap();
        let b = Shape::ball(3, 0.8).unwrap();
        for &rho in &[0.5, 3.0] {
            let (x, y) = (spectral_density(&e, rho), spectral_density(&b, rho));
            assert!(((x - y) / y).abs() < 1e-8);
        }
        let cube = Shape::<f64>::unit_cube(3).unwrap();
        assert!((spectral_density(&cube, 0.0) - 1.0).abs() < 1e-15);
        assert!(spectral_density(&cube, 2.5) > 0.0);
    }

    #[test]
    fn table_matches_direct_quadrature() {
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        let tab = SpectralDensity::tabulated(sq.clone(), 30.0, 0.02);
        for &rho in &[0.013, 1.234, 9.87, 29.99] {
            let (a, b) = (tab.value(rho), spectral_density(&sq, rho));
            assert!((a - b).abs() < 1e-6 * b.max(1e-4), "rho {rho}: {a} vs {b}");
        }
    }

    #[test]
    fn ball_decay_mean_converges() {
        // running mean of ρ^{d+1} γ̄̂ on [0, 200] approaches H/(2π² d κ_d)
        for d in [2usize, 3] {
            let b = Shape::ball(d, 1.0f64).unwrap();
            let c = mean_decay_coefficient(&b);
            let n = 200_000;
            let h = 200.0 / n as f64;
            let mean: f64 = (1..=n)
                .map(|k| {
                    let rho = k as f64 * h;
                    rho.powi(d as i32 + 1) * spectral_density(&b, rho)
                })
                .sum::<f64>()
                / n as f64;
            assert!((mean / c - 1.0).abs() < 0.02, "d={d}: {mean} vs {c}");
        }
    }
}
