//! Gauss–Legendre panels and sequence acceleration for oscillatory tails.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Rule with `n` nodes, computed by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        // nodes are computed in f64 and converted; for n <= 64 this is exact to rounding
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex(&self, a: T, b: T, mut f: impl FnMut(T) -> Complex<T>) -> Complex<T> {
        self.mapped(a, b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, w)| acc + f(x) * w)
    }

    /// Composite rule: every interval between consecutive `breaks` is split into
    /// `panels` equal panels.
    pub fn integrate_composite(&self, breaks: &[T], panels: usize, mut f: impl FnMut(T) -> T) -> T {
        let mut total = T::zero();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let h = (b - a) / T::from_usize_lossy(panels);
            for k in 0..panels {
                let lo = a + h * T::from_usize_lossy(k);
                let hi = if k + 1 == panels { b } else { lo + h };
                total += self.integrate(lo, hi, &mut f);
            }
        }
        total
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre with panel doubling until two successive estimates
/// agree within `abs_tol`. `initial_panels` panels are placed between every
/// pair of consecutive breakpoints.
pub fn integrate_adaptive<T: Real>(
    rule: &GaussLegendre<T>,
    breaks: &[T],
    initial_panels: usize,
    abs_tol: T,
    max_panels: usize,
    mut f: impl FnMut(T) -> T,
) -> (T, bool) {
    let mut panels = initial_panels.max(1);
    let mut prev = rule.integrate_composite(breaks, panels, &mut f);
    while panels * 2 <= max_panels {
        panels *= 2;
        let next = rule.integrate_composite(breaks, panels, &mut f);
        if (next - prev).abs() <= abs_tol {
            return (next, true);
        }
        prev = next;
    }
    (prev, false)
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// highest-order even-column estimate.
pub fn wynn_epsilon<T: Real>(sums: &[Complex<T>]) -> Complex<T> {
    let n = sums.len();
    if n < 3 {
        return *sums.last().expect("non-empty sequence");
    }
    let zero = Complex::new(T::zero(), T::zero());
    // e_prev: column k-1, e_cur: column k
    let mut e_prev = vec![zero; n + 1];
    let mut e_cur: Vec<Complex<T>> = sums.to_vec();
    let mut best = *sums.last().unwrap();
    let tiny = T::min_positive_value().sqrt();
    for k in 1..n {
        let len = n - k;
        let mut next = vec![zero; len];
        for i in 0..len {
            let diff = e_cur[i + 1] - e_cur[i];
            if diff.norm() < tiny {
                // stalled: the current column has already converged
                return if k % 2 == 1 { e_cur[i + 1] } else { best };
            }
            next[i] = e_prev[i + 1] + diff.inv();
        }
        e_prev = e_cur;
        e_cur = next;
        if k % 2 == 0 {
            best = *e_cur.last().unwrap();
        }
    }
    best
}

/// Sums an infinite sequence of segment integrals (typically between
/// consecutive zeros of an oscillating factor) with epsilon acceleration.
///
/// `segment(k)` returns the k-th contribution. Stops when three successive
/// accelerated estimates agree within `abs_tol`.
pub fn accelerated_series<T: Real>(
    abs_tol: T,
    min_terms: usize,
    max_terms: usize,
    what: &'static str,
    mut segment: impl FnMut(usize) -> Complex<T>,
) -> Result<Complex<T>> {
    const WINDOW: usize = 24;
    let mut partial = Complex::new(T::zero(), T::zero());
    let mut sums: Vec<Complex<T>> = Vec::with_capacity(max_terms.min(4096));
    let mut estimates: Vec<Complex<T>> = Vec::new();
    for k in 0..max_terms {
        partial += segment(k);
        sums.push(partial);
        if sums.len() < min_terms.max(4) {
            continue;
        }
        let start = sums.len().saturating_sub(WINDOW);
        let est = wynn_epsilon(&sums[start..]);
        estimates.push(est);
        let m = estimates.len();
        if m >= 3 {
            let d1 = (estimates[m - 1] - estimates[m - 2]).norm();
            let d2 = (estimates[m - 2] - estimates[m - 3]).norm();
            if d1 <= abs_tol && d2 <= abs_tol {
                return Ok(est);
            }
        }
    }
    Err(Error::NonConvergence {
        what,
        estimate: estimates.last().map(|e| e.re.to_f64_lossy()).unwrap_or(f64::NAN),
    })
}
