//! Small fixed-capacity vectors and matrices for dimensions 1 to 3.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

/// A point or direction in `R^d`, `d <= 3`. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector<T> {
    dim: usize,
    c: [T; MAX_DIM],
}

impl<T: Real> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Vector { dim, c: [T::zero(); MAX_DIM] }
    }

    pub fn from_slice(xs: &[T]) -> Self {
        let mut v = Self::zeros(xs.len());
        v.c[..xs.len()].copy_from_slice(xs);
        v
    }

    /// Vector with every component equal to `x`.
    pub fn splat(dim: usize, x: T) -> Self {
        let mut v = Self::zeros(dim);
        v.c[..dim].iter_mut().for_each(|c| *c = x);
        v
    }

    /// `i`-th canonical basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.c[i] = T::one();
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.c[..self.dim]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn scale(&self, s: T) -> Self {
        let mut v = *self;
        v.c.iter_mut().for_each(|c| *c = *c * s);
        v
    }

    /// Componentwise product.
    #[inline]
    pub fn hadamard(&self, other: &Self) -> Self {
        let mut v = *self;
        for i in 0..MAX_DIM {
            v.c[i] = v.c[i] * other.c[i];
        }
        v
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let mut v = *self;
        for i in 0..self.dim {
            v.c[i] = f(v.c[i]);
        }
        v
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }
}

impl<T: Real> Index<usize> for Vector<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        debug_assert!(i < self.dim);
        &self.c[i]
    }
}

impl<T: Real> IndexMut<usize> for Vector<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        debug_assert!(i < self.dim);
        &mut self.c[i]
    }
}

impl<T: Real> Add for Vector<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..MAX_DIM {
            self.c[i] = self.c[i] + rhs.c[i];
        }
        self
    }
}

impl<T: Real> Sub for Vector<T> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..MAX_DIM {
            self.c[i] = self.c[i] - rhs.c[i];
        }
        self
    }
}

impl<T: Real> Neg for Vector<T> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        self.c.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl<T: Real> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// Square `d x d` matrix, `d <= 3`, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    m: [[T; MAX_DIM]; MAX_DIM],
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Matrix { dim, m: [[T::zero(); MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut a = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            a.m[i][i] = x;
        }
        a
    }

    /// Builds a matrix from `d*d` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[T]) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not in 1..=3")));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let mut a = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                a.m[i][j] = entries[i * dim + j];
            }
        }
        Ok(a)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<T>]) -> Self {
        let dim = cols.len();
        let mut a = Self::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                a.m[i][j] = col[i];
            }
        }
        a
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_major(&self) -> Vec<T> {
        (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| self.m[i][j])).collect()
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        let mut v = Vector::zeros(self.dim);
        for i in 0..self.dim {
            v[i] = self.m[i][j];
        }
        v
    }

    pub fn row(&self, i: usize) -> Vector<T> {
        Vector::from_slice(&self.m[i][..self.dim])
    }

    #[inline]
    pub fn mul_vec(&self, v: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = Vector::zeros(self.dim);
        for i in 0..self.dim {
            let r = &self.m[i];
            out.c[i] = r[0] * v.c[0] + r[1] * v.c[1] + r[2] * v.c[2];
        }
        out
    }

    /// `Aᵀ v` without forming the transpose.
    #[inline]
    pub fn tr_mul_vec(&self, v: &Vector<T>) -> Vector<T> {
        let mut out = Vector::zeros(self.dim);
        for j in 0..self.dim {
            out.c[j] = self.m[0][j] * v.c[0] + self.m[1][j] * v.c[1] + self.m[2][j] * v.c[2];
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    pub fn scale(&self, s: T) -> Self {
        let mut a = *self;
        for row in a.m.iter_mut() {
            row.iter_mut().for_each(|x| *x = *x * s);
        }
        a
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        match self.dim {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let m = &self.m;
        let mut inv = Self::zeros(self.dim);
        match self.dim {
            1 => inv.m[0][0] = T::one() / m[0][0],
            2 => {
                inv.m[0][0] = m[1][1] / det;
                inv.m[0][1] = -m[0][1] / det;
                inv.m[1][0] = -m[1][0] / det;
                inv.m[1][1] = m[0][0] / det;
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor C_ji
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        inv.m[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
                    }
                }
            }
        }
        Some(inv)
    }

    /// Maximum absolute entrywise deviation from another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                d = d.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        d
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.m[i][j]
    }
}

impl<T: Real> Mul for Matrix<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = (0..self.dim).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        out
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.dim).map(|i| &self.m[i][..self.dim])).finish()
    }
}
