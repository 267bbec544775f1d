use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::real::Real;

/// Proper rotation of `R^d`.
#[derive(Clone, Copy, PartialEq)]
pub struct Rotation<T> {
    matrix: Matrix<T>,
}

impl<T: Real> Rotation<T> {
    pub fn identity(dim: usize) -> Self {
        Rotation { matrix: Matrix::identity(dim) }
    }

    /// Validates orthogonality and unit determinant within 1e-12 (scaled for `f32`).
    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        let d = matrix.dim();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        let gram = matrix.transpose() * matrix;
        if gram.max_abs_diff(&Matrix::identity(d)) > tol || (matrix.determinant() - T::one()).abs() > tol {
            return Err(Error::InvalidInput("matrix is not a proper rotation".into()));
        }
        Ok(Rotation { matrix })
    }

    /// Rotation of the plane by `angle` radians.
    pub fn planar(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let matrix = Matrix::from_row_major(2, &[c, -s, s, c]).expect("2x2");
        Rotation { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// `M v`.
    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        self.matrix.mul_vec(v)
    }

    /// `Mᵀ v`, the inverse rotation.
    pub fn apply_inverse(&self, v: &Vector<T>) -> Vector<T> {
        self.matrix.tr_mul_vec(v)
    }
}

impl<T: Real> std::fmt::Debug for Rotation<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rotation({:?})", self.matrix)
    }
}

/// Haar-distributed random rotation of `R^d`.
///
/// `d = 2` draws a uniform angle; `d = 3` orthonormalises a Gaussian matrix
/// and flips the last column when the determinant comes out negative.
pub fn random_rotation<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Rotation<T> {
    match dim {
        1 => Rotation::identity(1),
        2 => {
            let angle: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            Rotation::planar(T::lit(angle))
        }
        3 => loop {
            let mut cols: Vec<[f64; 3]> = Vec::with_capacity(3);
            let mut degenerate = false;
            for _ in 0..3 {
                let mut v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
                for c in &cols {
                    let p = v[0] * c[0] + v[1] * c[1] + v[2] * c[2];
                    for k in 0..3 {
                        v[k] -= p * c[k];
                    }
                }
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if n < 1e-8 {
                    degenerate = true;
                    break;
                }
                cols.push([v[0] / n, v[1] / n, v[2] / n]);
            }
            if degenerate {
                continue;
            }
            let det = cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
                - cols[1][0] * (cols[0][1] * cols[2][2] - cols[0][2] * cols[2][1])
                + cols[2][0] * (cols[0][1] * cols[1][2] - cols[0][2] * cols[1][1]);
            if det < 0.0 {
                cols[2] = [-cols[2][0], -cols[2][1], -cols[2][2]];
            }
            let vecs: Vec<Vector<T>> =
                cols.iter().map(|c| Vector::from_slice(&[T::lit(c[0]), T::lit(c[1]), T::lit(c[2])])).collect();
            break Rotation { matrix: Matrix::from_columns(&vecs) };
        },
        _ => panic!("rotation dimension {dim} unsupported"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_rotations_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=3 {
            for _ in 0..200 {
                let r: Rotation<f64> = random_rotation(d, &mut rng);
                assert!(Rotation::from_matrix(*r.matrix()).is_ok());
            }
        }
        assert_eq!(random_rotation::<f64, _>(1, &mut rng), Rotation::identity(1));
    }

    #[test]
    fn planar_angle_is_uniform() {
        // Kolmogorov-Smirnov against U(0, 2π) at level 0.01 (critical value 1.628/√n)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let mut angles: Vec<f64> = (0..n)
            .map(|_| {
                let r: Rotation<f64> = random_rotation(2, &mut rng);
                let m = r.matrix();
                m[(1, 0)].atan2(m[(0, 0)]).rem_euclid(std::f64::consts::TAU)
            })
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut dmax: f64 = 0.0;
        for (i, a) in angles.iter().enumerate() {
            let f = a / std::f64::consts::TAU;
            dmax = dmax.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs());
        }
        assert!(dmax < 1.628 / (n as f64).sqrt(), "KS statistic {dmax}");
    }

    #[test]
    fn rejects_reflections() {
        let m = Matrix::diagonal(&[1.0f64, -1.0]);
        assert!(Rotation::from_matrix(m).is_err());
    }
}
