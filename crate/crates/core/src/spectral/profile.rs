use crate::error::{Error, Result};
use crate::real::Real;

/// How a [`RadialProfile`] interpolates between its samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpolation {
    /// Shape-preserving piecewise cubic Hermite (PCHIP slopes).
    MonotoneCubic,
    /// C² cubic spline, end slopes from the cubic through the four end samples.
    CubicSpline,
}

/// A sampled radial function `f(t)`, `t >= 0`.
///
/// Inside `[t_0, t_last]` the profile interpolates its samples; below `t_0` it
/// is constant; beyond `t_last` it follows `c · t^p` where `p` is the tail
/// exponent and `c` defaults to `v_last / t_last^p`.
#[derive(Clone, Debug)]
pub struct RadialProfile<T> {
    t: Vec<T>,
    v: Vec<T>,
    slopes: Vec<T>,
    interpolation: Interpolation,
    tail_exponent: T,
    tail_coefficient: T,
}

impl<T: Real> RadialProfile<T> {
    /// Monotone-cubic profile.
    pub fn new(t: Vec<T>, v: Vec<T>, tail_exponent: T) -> Result<Self> {
        Self::with_interpolation(t, v, tail_exponent, Interpolation::MonotoneCubic)
    }

    pub fn with_interpolation(t: Vec<T>, v: Vec<T>, tail_exponent: T, interpolation: Interpolation) -> Result<Self> {
        if t.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: t.len(), found: v.len() });
        }
        if t.len() < 2 {
            return Err(Error::InvalidInput("a radial profile needs at least two samples".into()));
        }
        if t[0] < T::zero() || t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("profile abscissae must be nonnegative and strictly increasing".into()));
        }
        if v.iter().any(|x| !x.is_finite()) || tail_exponent.is_nan() {
            return Err(Error::InvalidInput("profile values must be finite".into()));
        }
        let slopes = match interpolation {
            Interpolation::MonotoneCubic => pchip_slopes(&t, &v),
            Interpolation::CubicSpline if t.len() >= 4 => spline_slopes(&t, &v),
            Interpolation::CubicSpline => pchip_slopes(&t, &v),
        };
        let (tl, vl) = (t[t.len() - 1], v[v.len() - 1]);
        let tail_coefficient = if vl == T::zero() { T::zero() } else { vl * tl.powf(-tail_exponent) };
        Ok(RadialProfile { t, v, slopes, interpolation, tail_exponent, tail_coefficient })
    }

    /// Samples `f` at the given abscissae.
    pub fn sample(t: Vec<T>, tail_exponent: T, interpolation: Interpolation, f: impl Fn(T) -> T) -> Result<Self> {
        let v = t.iter().map(|&x| f(x)).collect();
        Self::with_interpolation(t, v, tail_exponent, interpolation)
    }

    /// Replaces the tail coefficient by the mean of `v(t) · t^{-p}` over the
    /// samples with `t >= from`, weighted by the trapezoid rule. Suited to
    /// oscillating tails whose envelope follows `t^p`.
    pub fn fit_mean_tail(mut self, from: T) -> Self {
        let p = self.tail_exponent;
        let (mut num, mut den) = (T::zero(), T::zero());
        for i in 1..self.t.len() {
            let (a, b) = (self.t[i - 1], self.t[i]);
            if a < from || a <= T::zero() {
                continue;
            }
            let h = b - a;
            num += h * T::lit(0.5) * (self.v[i - 1] * a.powf(-p) + self.v[i] * b.powf(-p));
            den += h;
        }
        if den > T::zero() {
            self.tail_coefficient = num / den;
        }
        self
    }

    pub fn abscissae(&self) -> &[T] {
        &self.t
    }

    pub fn values(&self) -> &[T] {
        &self.v
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn tail_exponent(&self) -> T {
        self.tail_exponent
    }

    /// Coefficient `c` of the tail model `c · t^p`.
    pub fn tail_coefficient(&self) -> T {
        self.tail_coefficient
    }

    pub fn last_abscissa(&self) -> T {
        self.t[self.t.len() - 1]
    }

    /// Evaluates the profile.
    pub fn eval(&self, x: T) -> T {
        let n = self.t.len();
        if x >= self.t[n - 1] {
            if x == self.t[n - 1] {
                return self.v[n - 1];
            }
            return if self.tail_coefficient == T::zero() {
                T::zero()
            } else {
                self.tail_coefficient * x.powf(self.tail_exponent)
            };
        }
        if x <= self.t[0] {
            return self.v[0];
        }
        let i = self.t.partition_point(|&ti| ti <= x) - 1;
        self.hermite(i, x)
    }

    fn hermite(&self, i: usize, x: T) -> T {
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * self.v[i] + h10 * h * self.slopes[i] + h01 * self.v[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

fn secants<T: Real>(t: &[T], v: &[T]) -> (Vec<T>, Vec<T>) {
    let h: Vec<T> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<T> = (0..h.len()).map(|i| (v[i + 1] - v[i]) / h[i]).collect();
    (h, d)
}

fn pchip_slopes<T: Real>(t: &[T], v: &[T]) -> Vec<T> {
    let n = t.len();
    let (h, d) = secants(t, v);
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let two = T::lit(2.0);
    let mut m = vec![T::zero(); n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > T::zero() {
            let w1 = two * h[k] + h[k - 1];
            let w2 = h[k] + two * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: T, h1: T, d0: T, d1: T| {
        let s = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= T::zero() {
            T::zero()
        } else if d0 * d1 < T::zero() && s.abs() > (T::lit(3.0) * d0).abs() {
            T::lit(3.0) * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

// derivative at xs[0] of the cubic through four points
fn cubic_end_slope<T: Real>(xs: [T; 4], ys: [T; 4]) -> T {
    let mut total = T::zero();
    for j in 0..4 {
        let lj = if j == 0 {
            (1..4).map(|k| (xs[0] - xs[k]).recip()).sum::<T>()
        } else {
            let num: T = (1..4).filter(|&k| k != j).map(|k| xs[0] - xs[k]).fold(T::one(), |p, x| p * x);
            let den: T = (0..4).filter(|&k| k != j).map(|k| xs[j] - xs[k]).fold(T::one(), |p, x| p * x);
            num / den
        };
        total += lj * ys[j];
    }
    total
}

fn spline_slopes<T: Real>(t: &[T], v: &[T]) -> Vec<T> {
    let n = t.len();
    let (h, d) = secants(t, v);
    let m0 = cubic_end_slope([t[0], t[1], t[2], t[3]], [v[0], v[1], v[2], v[3]]);
    let mn = cubic_end_slope(
        [t[n - 1], t[n - 2], t[n - 3], t[n - 4]],
        [v[n - 1], v[n - 2], v[n - 3], v[n - 4]],
    );
    let mut m = vec![T::zero(); n];
    m[0] = m0;
    m[n - 1] = mn;
    if n == 2 {
        return m;
    }
    // h_i m_{i-1} + 2(h_{i-1} + h_i) m_i + h_{i-1} m_{i+1} = 3(h_i d_{i-1} + h_{i-1} d_i)
    let k = n - 2;
    let mut diag = vec![T::zero(); k];
    let mut upper = vec![T::zero(); k];
    let mut rhs = vec![T::zero(); k];
    let three = T::lit(3.0);
    for j in 0..k {
        let i = j + 1;
        diag[j] = T::lit(2.0) * (h[i - 1] + h[i]);
        upper[j] = h[i - 1];
        rhs[j] = three * (h[i] * d[i - 1] + h[i - 1] * d[i]);
    }
    rhs[0] -= h[1] * m0;
    rhs[k - 1] -= h[n - 3] * mn;
    // Thomas algorithm; sub-diagonal of row j is h[j + 1]
    for j in 1..k {
        let w = h[j + 1] / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        rhs[j] = rhs[j] - w * rhs[j - 1];
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for j in (0..k - 1).rev() {
        m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn reproduces_samples_and_tail() {
        let t = grid(0.0, 2.0, 11);
        for interp in [Interpolation::MonotoneCubic, Interpolation::CubicSpline] {
            let p = RadialProfile::sample(t.clone(), -3.0, interp, |x| 1.0 / (1.0 + x * x)).unwrap();
            for (&x, &y) in t.iter().zip(p.values()) {
                assert_eq!(p.eval(x), y);
            }
            assert!((p.eval(4.0) - 0.2 * (2.0f64).powi(-3)).abs() < 1e-15);
        }
    }

    #[test]
    fn spline_reproduces_cubics() {
        let t: Vec<f64> = (0..15).map(|i| (i as f64 * 0.3).powf(1.2)).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let p = RadialProfile::sample(t, -4.0, Interpolation::CubicSpline, f).unwrap();
        for k in 0..100 {
            let x = k as f64 * 0.05;
            assert!((p.eval(x) - f(x)).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let t = vec![0.0, 0.1, 0.2, 1.0, 1.1, 3.0];
        let v = vec![5.0, 5.0, 4.0, 0.5, 0.4, 0.0];
        let p = RadialProfile::new(t, v, f64::NEG_INFINITY).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=300 {
            let y = p.eval(k as f64 * 0.01);
            assert!(y <= prev + 1e-15);
            prev = y;
        }
        assert_eq!(p.eval(3.5), 0.0);
    }

    #[test]
    fn mean_tail_fit() {
        // oscillating tail 2 cos² t / t^4 has mean envelope 1 / t^4
        let t = grid(1.0, 400.0, 40_001);
        let p = RadialProfile::sample(t, -4.0, Interpolation::CubicSpline, |x| 2.0 * x.cos().powi(2) * x.powi(-4))
            .unwrap()
            .fit_mean_tail(200.0);
        assert!((p.tail_coefficient() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RadialProfile::new(vec![0.0, 0.0], vec![1.0, 1.0], -3.0).is_err());
        assert!(RadialProfile::new(vec![0.0], vec![1.0], -3.0).is_err());
        assert!(RadialProfile::new(vec![-1.0, 0.0], vec![1.0, 1.0], -3.0).is_err());
    }
}
