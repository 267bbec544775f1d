use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Vector, MAX_DIM};
use crate::real::{unit_ball_volume, unit_sphere_area, Real};

/// Centered body in `R^d`, `d ∈ {1, 2, 3}`. Closed: boundary points belong to it.
#[derive(Clone, PartialEq)]
pub enum Shape<T> {
    Ball { dim: usize, radius: T },
    /// Axis-aligned box `Π [-a_i, a_i]`.
    Box { half_extents: Vector<T> },
    /// Axis-aligned ellipsoid `Σ (x_i / s_i)² <= 1`.
    Ellipsoid { semi_axes: Vector<T> },
}

impl<T: Real> Shape<T> {
    pub fn ball(dim: usize, radius: T) -> Result<Self> {
        check_dim(dim)?;
        check_positive("radius", radius)?;
        Ok(Shape::Ball { dim, radius })
    }

    pub fn cuboid(half_extents: &[T]) -> Result<Self> {
        check_dim(half_extents.len())?;
        for &a in half_extents {
            check_positive("half extent", a)?;
        }
        Ok(Shape::Box { half_extents: Vector::from_slice(half_extents) })
    }

    /// Cube `[-1/2, 1/2]^d` of unit volume.
    pub fn unit_cube(dim: usize) -> Result<Self> {
        Self::cuboid(&vec![T::lit(0.5); dim])
    }

    pub fn ellipsoid(semi_axes: &[T]) -> Result<Self> {
        check_dim(semi_axes.len())?;
        for &s in semi_axes {
            check_positive("semi-axis", s)?;
        }
        Ok(Shape::Ellipsoid { semi_axes: Vector::from_slice(semi_axes) })
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { dim, .. } => *dim,
            Shape::Box { half_extents } => half_extents.dim(),
            Shape::Ellipsoid { semi_axes } => semi_axes.dim(),
        }
    }

    /// Radius of a centered ball containing the shape.
    pub fn bounding_radius(&self) -> T {
        match self {
            Shape::Ball { radius, .. } => *radius,
            Shape::Box { half_extents } => half_extents.norm(),
            Shape::Ellipsoid { semi_axes } => {
                semi_axes.as_slice().iter().fold(T::zero(), |m, &s| m.max(s))
            }
        }
    }

    /// True when the shape is invariant under all rotations.
    pub fn is_rotation_invariant(&self) -> bool {
        match self {
            Shape::Ball { .. } => true,
            _ => self.dim() == 1,
        }
    }

    /// The same body as a box when `d = 1` (every 1-d shape is an interval).
    pub fn as_interval(&self) -> Option<Self> {
        if self.dim() != 1 {
            return None;
        }
        let a = match self {
            Shape::Ball { radius, .. } => *radius,
            Shape::Box { half_extents } => half_extents[0],
            Shape::Ellipsoid { semi_axes } => semi_axes[0],
        };
        Some(Shape::Box { half_extents: Vector::from_slice(&[a]) })
    }

    /// Lebesgue measure of the body.
    pub fn volume(&self) -> T {
        let d = self.dim();
        match self {
            Shape::Ball { radius, .. } => unit_ball_volume::<T>(d) * radius.powi(d as i32),
            Shape::Box { half_extents } => {
                half_extents.as_slice().iter().map(|&a| a + a).fold(T::one(), |p, x| p * x)
            }
            Shape::Ellipsoid { semi_axes } => {
                unit_ball_volume::<T>(d) * semi_axes.as_slice().iter().fold(T::one(), |p, &s| p * s)
            }
        }
    }

    /// (d-1)-dimensional measure of the boundary; in `d = 1` the number of endpoints.
    pub fn surface_measure(&self) -> T {
        let d = self.dim();
        if d == 1 {
            return T::lit(2.0);
        }
        match self {
            Shape::Ball { radius, .. } => unit_sphere_area::<T>(d) * radius.powi(d as i32 - 1),
            Shape::Box { half_extents } => {
                let a = half_extents.as_slice();
                let mut total = T::zero();
                for i in 0..d {
                    let face: T = (0..d).filter(|&j| j != i).map(|j| a[j] + a[j]).fold(T::one(), |p, x| p * x);
                    total += face + face;
                }
                total
            }
            Shape::Ellipsoid { semi_axes } => {
                let s = semi_axes.as_slice();
                if d == 2 {
                    ellipse_perimeter(s[0], s[1])
                } else {
                    ellipsoid_surface(s[0], s[1], s[2])
                }
            }
        }
    }

    /// Membership test, boundary included.
    pub fn contains(&self, p: &Vector<T>) -> bool {
        match self {
            Shape::Ball { radius, .. } => p.norm_squared() <= *radius * *radius,
            Shape::Box { half_extents } => {
                (0..p.dim()).all(|i| p[i].abs() <= half_extents[i])
            }
            Shape::Ellipsoid { semi_axes } => {
                let mut q = T::zero();
                for i in 0..p.dim() {
                    let t = p[i] / semi_axes[i];
                    q += t * t;
                }
                q <= T::one()
            }
        }
    }
}

impl<T: Real> fmt::Debug for Shape<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ball { dim, radius } => write!(f, "Ball(d={dim}, R={radius})"),
            Shape::Box { half_extents } => write!(f, "Box{half_extents:?}"),
            Shape::Ellipsoid { semi_axes } => write!(f, "Ellipsoid{semi_axes:?}"),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!("dimension {d} not in 1..=3")))
    }
}

fn check_positive<T: Real>(what: &str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!("{what} must be positive and finite, got {x}")))
    }
}

// Carlson symmetric integrals by duplication; relative accuracy ~1e-15.
fn carlson_rf<T: Real>(mut x: T, mut y: T, mut z: T) -> T {
    let third = T::one() / T::lit(3.0);
    for _ in 0..100 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) * T::lit(0.25);
        y = (y + lam) * T::lit(0.25);
        z = (z + lam) * T::lit(0.25);
        let mu = (x + y + z) * third;
        let dev = ((x - mu).abs().max((y - mu).abs()).max((z - mu).abs())) / mu;
        if dev < T::lit(1e-4) * T::epsilon().powf(T::lit(1.0 / 6.0)) {
            break;
        }
    }
    let mu = (x + y + z) * third;
    let (ex, ey) = (T::one() - x / mu, T::one() - y / mu);
    let ez = -(ex + ey);
    let e2 = ex * ey - ez * ez;
    let e3 = ex * ey * ez;
    (T::one() - e2 / T::lit(10.0) + e3 / T::lit(14.0) + e2 * e2 / T::lit(24.0)
        - T::lit(3.0) * e2 * e3 / T::lit(44.0))
        / mu.sqrt()
}

fn carlson_rd<T: Real>(mut x: T, mut y: T, mut z: T) -> T {
    let mut sum = T::zero();
    let mut fac = T::one();
    for _ in 0..100 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lam));
        fac *= T::lit(0.25);
        x = (x + lam) * T::lit(0.25);
        y = (y + lam) * T::lit(0.25);
        z = (z + lam) * T::lit(0.25);
        let mu = (x + y + T::lit(3.0) * z) / T::lit(5.0);
        let dev = ((x - mu).abs().max((y - mu).abs()).max((z - mu).abs())) / mu;
        if dev < T::lit(1e-4) * T::epsilon().powf(T::lit(1.0 / 6.0)) {
            break;
        }
    }
    let mu = (x + y + T::lit(3.0) * z) / T::lit(5.0);
    let (ex, ey, ez) = ((mu - x) / mu, (mu - y) / mu, (mu - z) / mu);
    let ea = ex * ey;
    let eb = ez * ez;
    let ec = ea - eb;
    let ed = ea - T::lit(6.0) * eb;
    let ee = ed + ec + ec;
    let series = T::one()
        + ed * (-T::lit(3.0) / T::lit(14.0) + T::lit(9.0) / T::lit(88.0) * ed - T::lit(4.5) / T::lit(26.0) * ez * ee)
        + ez * (ee / T::lit(6.0) + ez * (-T::lit(9.0) / T::lit(22.0) * ec + ez * T::lit(3.0) / T::lit(26.0) * ea));
    T::lit(3.0) * sum + fac * series / (mu * mu.sqrt())
}

/// Carlson R_G(x, y, z) with `z > 0`.
fn carlson_rg<T: Real>(x: T, y: T, z: T) -> T {
    let three = T::lit(3.0);
    let tail = if x == T::zero() || y == T::zero() { T::zero() } else { (x * y / z).sqrt() };
    (z * carlson_rf(x, y, z) - (x - z) * (y - z) * carlson_rd(x, y, z) / three + tail) * T::lit(0.5)
}

fn ellipse_perimeter<T: Real>(a: T, b: T) -> T {
    // L = 8 R_G(0, a², b²)
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    T::lit(8.0) * carlson_rg(T::zero(), lo * lo, hi * hi)
}

fn ellipsoid_surface<T: Real>(a: T, b: T, c: T) -> T {
    // S = 4π abc R_G(a^-2, b^-2, c^-2); put the largest argument last
    let mut v = [T::one() / (a * a), T::one() / (b * b), T::one() / (c * c)];
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let four_pi = T::lit(4.0) * T::PI();
    four_pi * a * b * c * carlson_rg(v[0], v[1], v[2])
}
