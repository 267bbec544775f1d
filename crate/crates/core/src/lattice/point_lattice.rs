use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Rotation, Shape};
use crate::linalg::{Matrix, Vector};
use crate::real::Real;

/// Largest integer box scanned by the enumeration routines.
pub const ENUMERATION_LIMIT: f64 = 1e9;

/// The point lattice `A Z^d` together with its character dual `A^{-T} Z^d`.
#[derive(Clone, Copy, PartialEq)]
pub struct Lattice<T> {
    generator: Matrix<T>,
    inverse: Matrix<T>,
    dual: Matrix<T>,
    determinant: T,
}

/// Builds the lattice generated by the columns of `a`.
///
/// Fails with [`Error::SingularGenerator`] when `|det A| <= 1e-12`.
pub fn make_lattice<T: Real>(a: Matrix<T>) -> Result<Lattice<T>> {
    let det = a.determinant();
    if !(det.abs() > T::lit(1e-12)) {
        return Err(Error::SingularGenerator { determinant: det.to_f64_lossy() });
    }
    let inverse = a.inverse().ok_or(Error::SingularGenerator { determinant: det.to_f64_lossy() })?;
    Ok(Lattice { generator: a, inverse, dual: inverse.transpose(), determinant: det.abs() })
}

impl<T: Real> Lattice<T> {
    /// The integer lattice `Z^d`.
    pub fn integer(dim: usize) -> Self {
        make_lattice(Matrix::identity(dim)).expect("identity is regular")
    }

    /// `c Z^d`.
    pub fn scaled_integer(dim: usize, c: T) -> Result<Self> {
        make_lattice(Matrix::identity(dim).scale(c))
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn generator(&self) -> &Matrix<T> {
        &self.generator
    }

    /// `A^{-T}`, generator of the dual lattice.
    pub fn dual_generator(&self) -> &Matrix<T> {
        &self.dual
    }

    /// `|det A|`, the volume of a fundamental cell.
    pub fn determinant(&self) -> T {
        self.determinant
    }

    /// Points per unit volume, `1 / |det A|`.
    pub fn intensity(&self) -> T {
        self.determinant.recip()
    }

    /// Lattice generated by `B = A^{-T}`.
    pub fn dual(&self) -> Self {
        Lattice {
            generator: self.dual,
            inverse: self.generator.transpose(),
            dual: self.generator,
            determinant: self.determinant.recip(),
        }
    }

    /// Uniform point of the fundamental cell `A [0,1)^d`.
    pub fn sample_fundamental_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector<T> {
        let d = self.dim();
        let mut u = Vector::zeros(d);
        for i in 0..d {
            u[i] = T::lit(rng.gen::<f64>());
        }
        self.generator.mul_vec(&u)
    }

    /// Number of lattice points in `r M D + x`.
    pub fn count_points(&self, shape: &Shape<T>, r: T, rotation: &Rotation<T>, x: &Vector<T>) -> Result<u64> {
        let d = self.dim();
        check_dims(d, shape.dim())?;
        check_dims(d, x.dim())?;
        let reach = r * shape.bounding_radius();
        let center = self.inverse.mul_vec(x);
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        let mut candidates = 1.0f64;
        for i in 0..d {
            let h = reach * self.inverse.row(i).norm();
            lo[i] = (center[i] - h).ceil().to_i64().unwrap_or(i64::MIN);
            hi[i] = (center[i] + h).floor().to_i64().unwrap_or(i64::MAX);
            candidates *= (hi[i] - lo[i] + 1).max(0) as f64;
        }
        if candidates > ENUMERATION_LIMIT {
            return Err(Error::OverflowGuard { candidates, limit: ENUMERATION_LIMIT });
        }
        if candidates == 0.0 {
            return Ok(0);
        }
        let inv_r = r.recip();
        let mut count = 0u64;
        for_each_in_box(d, &lo, &hi, |n| {
            let p = self.generator.mul_vec(&int_vector(d, n));
            let q = rotation.apply_inverse(&(p - *x).scale(inv_r));
            if shape.contains(&q) {
                count += 1;
            }
        });
        Ok(count)
    }

    /// Nonzero points `B n` of the dual lattice with `|B n| <= radius`, ordered
    /// by norm and then lexicographically in `n`.
    pub fn dual_points_in_ball(&self, radius: T) -> Result<Vec<Vector<T>>> {
        Ok(points_in_ball(&self.dual, &self.generator.transpose(), radius)?.into_iter().map(|(v, _)| v).collect())
    }

    /// Nonzero lattice points `A n` with `|A n| <= radius`, same ordering.
    pub fn points_in_ball(&self, radius: T) -> Result<Vec<Vector<T>>> {
        Ok(points_in_ball(&self.generator, &self.inverse, radius)?.into_iter().map(|(v, _)| v).collect())
    }

    /// Squared norms of the nonzero dual points with `|ξ| <= radius`, ascending.
    pub(crate) fn dual_squared_norms(&self, radius: T) -> Result<Vec<T>> {
        squared_norms_in_ball(&self.dual, &self.generator.transpose(), radius)
    }

    /// Squared norms of the nonzero lattice points with `|t| <= radius`, ascending.
    pub(crate) fn squared_norms(&self, radius: T) -> Result<Vec<T>> {
        squared_norms_in_ball(&self.generator, &self.inverse, radius)
    }
}

impl<T: Real> std::fmt::Debug for Lattice<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(A = {:?})", self.generator)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn int_vector<T: Real>(d: usize, n: &[i64; 3]) -> Vector<T> {
    let mut v = Vector::zeros(d);
    for i in 0..d {
        v[i] = T::lit(n[i] as f64);
    }
    v
}

fn for_each_in_box(d: usize, lo: &[i64; 3], hi: &[i64; 3], mut f: impl FnMut(&[i64; 3])) {
    let mut n = [0i64; 3];
    let (lo1, hi1) = if d > 1 { (lo[1], hi[1]) } else { (0, 0) };
    let (lo2, hi2) = if d > 2 { (lo[2], hi[2]) } else { (0, 0) };
    for a in lo[0]..=hi[0] {
        n[0] = a;
        for b in lo1..=hi1 {
            n[1] = b;
            for c in lo2..=hi2 {
                n[2] = c;
                f(&n);
            }
        }
    }
}

// Nonzero G n with |G n| <= radius; `g_inv` is G^{-1}.
pub(crate) fn points_in_ball<T: Real>(
    g: &Matrix<T>,
    g_inv: &Matrix<T>,
    radius: T,
) -> Result<Vec<(Vector<T>, [i64; 3])>> {
    let d = g.dim();
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    let mut candidates = 1.0f64;
    for i in 0..d {
        let m = (radius * g_inv.row(i).norm()).floor().to_i64().unwrap_or(i64::MAX);
        lo[i] = -m;
        hi[i] = m;
        candidates *= (2 * m + 1) as f64;
    }
    if candidates > ENUMERATION_LIMIT {
        return Err(Error::OverflowGuard { candidates, limit: ENUMERATION_LIMIT });
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    for_each_in_box(d, &lo, &hi, |n| {
        if n.iter().all(|&k| k == 0) {
            return;
        }
        let v = g.mul_vec(&int_vector(d, n));
        if v.norm_squared() <= r2 {
            out.push((v, *n));
        }
    });
    out.sort_by(|(u, m), (v, n)| u.norm_squared().partial_cmp(&v.norm_squared()).unwrap().then(m.cmp(n)));
    Ok(out)
}

// Squared norms of the nonzero points of `G Z^d` within `radius`, ascending.
pub(crate) fn squared_norms_in_ball<T: Real>(g: &Matrix<T>, g_inv: &Matrix<T>, radius: T) -> Result<Vec<T>> {
    let d = g.dim();
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    let mut candidates = 1.0f64;
    for i in 0..d {
        let m = (radius * g_inv.row(i).norm()).floor().to_i64().unwrap_or(i64::MAX);
        lo[i] = -m;
        hi[i] = m;
        candidates *= (2 * m + 1) as f64;
    }
    if candidates > ENUMERATION_LIMIT {
        return Err(Error::OverflowGuard { candidates, limit: ENUMERATION_LIMIT });
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    for_each_in_box(d, &lo, &hi, |n| {
        if n.iter().all(|&k| k == 0) {
            return;
        }
        let q = g.mul_vec(&int_vector(d, n)).norm_squared();
        if q <= r2 {
            out.push(q);
        }
    });
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}
