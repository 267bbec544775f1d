use crate::geometry::Shape;
use crate::linalg::Vector;
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::real::{unit_ball_volume, Real};

/// Covariogram of the unit ball in `d` dimensions at distance `t >= 0`.
pub(crate) fn unit_ball_covariogram<T: Real>(d: usize, t: T) -> T {
    let two = T::lit(2.0);
    if t >= two {
        return T::zero();
    }
    match d {
        1 => two - t,
        2 => {
            let h = t * T::lit(0.5);
            T::lit(2.0) * h.acos() - t * (T::one() - h * h).sqrt()
        }
        3 => {
            let pi43 = T::lit(4.0) / T::lit(3.0) * T::PI();
            pi43 * (T::one() - T::lit(0.75) * t + t * t * t / T::lit(16.0))
        }
        _ => panic!("dimension {d} unsupported"),
    }
}

/// γ_D(x) = λ^d(D ∩ (D + x)).
pub fn covariogram<T: Real>(shape: &Shape<T>, x: &Vector<T>) -> T {
    let d = shape.dim();
    assert_eq!(x.dim(), d, "covariogram argument has the wrong dimension");
    match shape {
        Shape::Ball { radius, .. } => radius.powi(d as i32) * unit_ball_covariogram(d, x.norm() / *radius),
        Shape::Box { half_extents } => (0..d)
            .map(|i| (half_extents[i] + half_extents[i] - x[i].abs()).max(T::zero()))
            .fold(T::one(), |p, f| p * f),
        Shape::Ellipsoid { semi_axes } => {
            let scaled = x.hadamard(&semi_axes.map(|s| s.recip()));
            let jac = semi_axes.as_slice().iter().fold(T::one(), |p, &s| p * s);
            jac * unit_ball_covariogram(d, scaled.norm())
        }
    }
}

/// Isotropic covariogram γ̄_D(t): the average of γ_D(t u) over unit vectors `u`.
///
/// Balls and intervals use closed forms. Boxes and ellipsoids integrate over
/// the sphere with Gauss–Legendre panels split at the kinks of the integrand,
/// doubling the panel count until the change is below `1e-10 · volume`.
pub fn isotropic_covariogram<T: Real>(shape: &Shape<T>, t: T) -> T {
    let d = shape.dim();
    let t = t.abs();
    if t == T::zero() {
        return shape.volume();
    }
    if t >= T::lit(2.0) * shape.bounding_radius() {
        return T::zero();
    }
    if shape.is_rotation_invariant() {
        let mut x = Vector::zeros(d);
        x[0] = t;
        return covariogram(shape, &x);
    }
    let vol = shape.volume();
    let tol = vol * T::lit(1e-10).max(T::epsilon() * T::lit(16.0));
    let rule = GaussLegendre::new(10);
    let half_pi = T::FRAC_PI_2();
    // the supported shapes are symmetric under every coordinate reflection,
    // so one octant of the sphere suffices
    if d == 2 {
        let f = |theta: T| {
            let (s, c) = theta.sin_cos();
            covariogram(shape, &Vector::from_slice(&[t * c, t * s]))
        };
        let breaks = with_ends(T::zero(), half_pi, planar_kinks(shape, t, T::one()));
        let (v, _) = integrate_adaptive(&rule, &breaks, 2, tol * half_pi, 1 << 12, f);
        return v / half_pi;
    }
    // d = 3: z = cos θ on [0, 1] outside, azimuth φ on [0, π/2] inside
    let inner = |z: T| {
        let rho = (T::one() - z * z).max(T::zero()).sqrt();
        let f = |phi: T| {
            let (s, c) = phi.sin_cos();
            covariogram(shape, &Vector::from_slice(&[t * rho * c, t * rho * s, t * z]))
        };
        let breaks = with_ends(T::zero(), half_pi, azimuth_kinks(shape, t, z));
        integrate_adaptive(&rule, &breaks, 2, tol * T::lit(0.1), 1 << 12, f).0
    };
    let breaks = with_ends(T::zero(), T::one(), polar_kinks(shape, t));
    let (v, _) = integrate_adaptive(&rule, &breaks, 2, tol * half_pi, 1 << 10, inner);
    v / half_pi
}

/// Right derivative of the isotropic covariogram at 0,
/// `-(κ_{d-1} / (d κ_d)) · H^{d-1}(∂D)`.
pub fn gamma_prime_zero<T: Real>(shape: &Shape<T>) -> T {
    let d = shape.dim();
    -(unit_ball_volume::<T>(d - 1) / (T::from_usize_lossy(d) * unit_ball_volume::<T>(d)))
        * shape.surface_measure()
}

fn with_ends<T: Real>(a: T, b: T, mut inner: Vec<T>) -> Vec<T> {
    inner.retain(|&x| x > a && x < b && x.is_finite());
    inner.push(a);
    inner.push(b);
    inner.sort_by(|p, q| p.partial_cmp(q).unwrap());
    inner.dedup();
    inner
}

fn push_acos<T: Real>(out: &mut Vec<T>, c: T) {
    if c > T::zero() && c < T::one() {
        out.push(c.acos());
    }
}

// Angles in (0, π/2) where the planar integrand at radius t·scale has a kink.
fn planar_kinks<T: Real>(shape: &Shape<T>, t: T, scale: T) -> Vec<T> {
    let rho = t * scale;
    let mut out = Vec::new();
    match shape {
        Shape::Box { half_extents } => {
            let (a1, a2) = (half_extents[0], half_extents[1]);
            push_acos(&mut out, T::lit(2.0) * a1 / rho);
            let s = T::lit(2.0) * a2 / rho;
            if s > T::zero() && s < T::one() {
                out.push(s.asin());
            }
        }
        Shape::Ellipsoid { semi_axes } => {
            let (p, q) = (semi_axes[0].powi(-2), semi_axes[1].powi(-2));
            if p != q {
                let c2 = (T::lit(4.0) / (rho * rho) - q) / (p - q);
                push_acos(&mut out, c2.max(T::zero()).sqrt());
            }
        }
        Shape::Ball { .. } => {}
    }
    out
}

fn azimuth_kinks<T: Real>(shape: &Shape<T>, t: T, z: T) -> Vec<T> {
    let rho2 = (T::one() - z * z).max(T::zero());
    match shape {
        Shape::Ellipsoid { semi_axes } => {
            let (p, q, r) = (semi_axes[0].powi(-2), semi_axes[1].powi(-2), semi_axes[2].powi(-2));
            let mut out = Vec::new();
            if p != q && rho2 > T::zero() {
                let c2 = ((T::lit(4.0) / (t * t) - z * z * r) / rho2 - q) / (p - q);
                push_acos(&mut out, c2.max(T::zero()).sqrt());
            }
            out
        }
        _ => planar_kinks(shape, t, rho2.sqrt()),
    }
}

// Values of z = cos θ in (0, 1) where the azimuthal integral has a kink.
fn polar_kinks<T: Real>(shape: &Shape<T>, t: T) -> Vec<T> {
    let four_t2 = T::lit(4.0) / (t * t);
    let mut out = Vec::new();
    let mut push_sq = |z2: T| {
        if z2 > T::zero() && z2 < T::one() {
            out.push(z2.sqrt());
        }
    };
    match shape {
        Shape::Box { half_extents } => {
            let (a1, a2, a3) = (half_extents[0], half_extents[1], half_extents[2]);
            push_sq(a3 * a3 * four_t2);
            push_sq(T::one() - a1 * a1 * four_t2);
            push_sq(T::one() - a2 * a2 * four_t2);
            push_sq(T::one() - (a1 * a1 + a2 * a2) * four_t2);
        }
        Shape::Ellipsoid { semi_axes } => {
            let r = semi_axes[2].powi(-2);
            for i in 0..2 {
                let p = semi_axes[i].powi(-2);
                if p != r {
                    push_sq((four_t2 - p) / (r - p));
                }
            }
        }
        Shape::Ball { .. } => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn ball_lens_volume() {
        let b = Shape::ball(3, 1.0f64).unwrap();
        let v = covariogram(&b, &Vector::from_slice(&[0.0, 1.0, 0.0]));
        assert!((v - 5.0 * PI / 12.0).abs() < 1e-14);
        assert!((covariogram(&b, &Vector::zeros(3)) - b.volume()).abs() < 1e-15);
        let disk = Shape::ball(2, 2.0).unwrap();
        assert_eq!(covariogram(&disk, &Vector::from_slice(&[4.0, 0.0])), 0.0);
    }

    #[test]
    fn box_and_ellipsoid_closed_forms() {
        let bx = Shape::cuboid(&[1.0f64, 0.5]).unwrap();
        assert!((covariogram(&bx, &Vector::from_slice(&[0.5, -0.25])) - 1.5 * 0.75).abs() < 1e-15);
        assert_eq!(covariogram(&bx, &Vector::from_slice(&[0.1, 1.0])), 0.0);
        // a ball written as an ellipsoid
        let e = Shape::ellipsoid(&[1.5f64, 1.5, 1.5]).unwrap();
        let b = Shape::ball(3, 1.5).unwrap();
        let x = Vector::from_slice(&[0.3, -0.7, 1.1]);
        assert!((covariogram(&e, &x) - covariogram(&b, &x)).abs() < 1e-13);
    }

    #[test]
    fn covariogram_matches_monte_carlo_overlap() {
        // oracle: fraction of uniform points of D that stay in D after shifting by -x
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shapes = [
            Shape::ball(2, 1.0f64).unwrap(),
            Shape::cuboid(&[0.5, 0.8, 0.3]).unwrap(),
            Shape::ellipsoid(&[1.0, 0.6]).unwrap(),
        ];
        for shape in &shapes {
            let d = shape.dim();
            let rb: f64 = shape.bounding_radius();
            let x = Vector::from_slice(&[0.4, 0.3, 0.2][..d]);
            let n = 200_000;
            let (mut hits, mut inside) = (0usize, 0usize);
            for _ in 0..n {
                let p = Vector::from_slice(&(0..d).map(|_| rng.gen_range(-rb..rb)).collect::<Vec<_>>());
                if shape.contains(&p) {
                    inside += 1;
                    if shape.contains(&(p - x)) {
                        hits += 1;
                    }
                }
            }
            let box_vol = (2.0 * rb).powi(d as i32);
            let frac = hits as f64 / n as f64;
            let est = frac * box_vol;
            let se = (frac * (1.0 - frac) / n as f64).sqrt() * box_vol;
            let exact = covariogram(shape, &x);
            assert!((est - exact).abs() < 3.0 * se, "{shape:?}: {est} ± {se} vs {exact}");
            assert!(inside > 0);
        }
    }

    #[test]
    fn isotropic_matches_closed_forms() {
        let b = Shape::ball(3, 1.0f64).unwrap();
        let e = Shape::ellipsoid(&[1.0f64, 1.0, 1.0]).unwrap();
        for &t in &[0.0, 0.3, 1.0, 1.7, 2.5] {
            let exact = covariogram(&b, &Vector::from_slice(&[t, 0.0, 0.0]));
            assert!((isotropic_covariogram(&b, t) - exact).abs() < 1e-14);
            assert!((isotropic_covariogram(&e, t) - exact).abs() < 1e-9);
        }
        let interval = Shape::cuboid(&[0.5f64]).unwrap();
        assert!((isotropic_covariogram(&interval, 0.25) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn isotropic_square_against_direct_angle_average() {
        // oracle: midpoint rule over the full circle with many nodes
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        for &t in &[0.2, 0.5, 0.9, 1.2, 1.4] {
            let n = 200_000;
            let oracle: f64 = (0..n)
                .map(|k| {
                    let th = (k as f64 + 0.5) * 2.0 * PI / n as f64;
                    (1.0 - t * th.cos().abs()).max(0.0) * (1.0 - t * th.sin().abs()).max(0.0)
                })
                .sum::<f64>()
                / n as f64;
            let v = isotropic_covariogram(&sq, t);
            assert!((v - oracle).abs() < 1e-9, "t = {t}: {v} vs {oracle}");
        }
    }

    #[test]
    fn isotropic_unit_square_monte_carlo() {
        // overlap volume for random directions, estimated with random points
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        let t = 0.5;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mut hits = 0usize;
        for _ in 0..n {
            let th: f64 = rng.gen_range(0.0..2.0 * PI);
            let p = Vector::from_slice(&[rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]);
            let shift = Vector::from_slice(&[t * th.cos(), t * th.sin()]);
            if sq.contains(&(p - shift)) {
                hits += 1;
            }
        }
        let f = hits as f64 / n as f64;
        let se = (f * (1.0 - f) / n as f64).sqrt();
        let v = isotropic_covariogram(&sq, t);
        assert!((v - f).abs() < 3.0 * se, "{v} vs {f} ± {se}");
    }

    #[test]
    fn isotropic_cube_direct_sphere_average() {
        // oracle: product midpoint rule in (cos θ, φ) on the octant
        let cube = Shape::cuboid(&[0.5, 0.4, 0.3]).unwrap();
        let t = 0.7;
        let (nz, np) = (1500, 1500);
        let mut acc = 0.0;
        for i in 0..nz {
            let z = (i as f64 + 0.5) / nz as f64;
            let rho = (1.0 - z * z).sqrt();
            for j in 0..np {
                let phi = (j as f64 + 0.5) * PI / 2.0 / np as f64;
                acc += covariogram(&cube, &Vector::from_slice(&[t * rho * phi.cos(), t * rho * phi.sin(), t * z]));
            }
        }
        let oracle = acc / (nz * np) as f64;
        let v = isotropic_covariogram(&cube, t);
        assert!((v - oracle).abs() < 2e-6, "{v} vs {oracle}");
    }

    #[test]
    fn slope_at_zero() {
        assert!((gamma_prime_zero(&Shape::ball(3, 1.0).unwrap()) + PI).abs() < 1e-14);
        assert!((gamma_prime_zero(&Shape::cuboid(&[0.5f64]).unwrap()) + 1.0).abs() < 1e-15);
        let sq = Shape::<f64>::unit_cube(2).unwrap();
        assert!((gamma_prime_zero(&sq) + 4.0 / PI).abs() < 1e-14);
        for shape in [
            Shape::ball(2, 1.0f64).unwrap(),
            Shape::ball(3, 1.0).unwrap(),
            Shape::unit_cube(2).unwrap(),
            Shape::unit_cube(3).unwrap(),
            Shape::ellipsoid(&[1.0, 0.5, 0.8]).unwrap(),
        ] {
            let h = 1e-4 * shape.bounding_radius();
            let fd = (isotropic_covariogram(&shape, h) - shape.volume()) / h;
            let g = gamma_prime_zero(&shape);
            assert!(((fd - g) / g).abs() < 0.01, "{shape:?}: {fd} vs {g}");
        }
    }

    #[test]
    fn isotropic_is_nonincreasing() {
        for shape in [Shape::<f64>::unit_cube(3).unwrap(), Shape::ellipsoid(&[1.0, 0.4]).unwrap()] {
            let rmax = 2.0 * shape.bounding_radius();
            let mut prev = shape.volume();
            for k in 1..=40 {
                let v = isotropic_covariogram(&shape, rmax * k as f64 / 40.0);
                assert!(v <= prev + 1e-9, "{shape:?} at step {k}");
                assert!(v >= -1e-12);
                prev = v;
            }
        }
    }
}
