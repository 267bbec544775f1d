//! Bessel functions of the first kind for integer and half-integer orders.
//!
//! Small arguments use the power series. Half-integer orders use the
//! trigonometric closed forms with upward recurrence, integer orders Miller's
//! backward recurrence for moderate arguments and the Hankel asymptotic
//! expansion beyond that.

use crate::real::Real;
use crate::spectral::gamma::gamma;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

fn assert_supported<T: Real>(nu: T) {
    let twice = nu + nu;
    assert!(
        nu >= T::lit(-0.5) && twice == twice.round(),
        "Bessel order {nu} unsupported: need 2ν integral and ν >= -1/2"
    );
}

fn is_integer<T: Real>(nu: T) -> bool {
    nu == nu.round()
}

/// J_ν(x) for `x >= 0` and `ν ∈ {-1/2, 0, 1/2, 1, 3/2, ...}`.
pub fn bessel_j<T: Real>(nu: T, x: T) -> T {
    assert_supported(nu);
    assert!(x >= T::zero(), "bessel_j needs x >= 0");
    if x == T::zero() {
        return if nu == T::zero() {
            T::one()
        } else if nu < T::zero() {
            T::infinity()
        } else {
            T::zero()
        };
    }
    let series_limit = T::lit(SERIES_LIMIT).max(nu * T::lit(0.5));
    if x < series_limit {
        return series(nu, x);
    }
    if is_integer(nu) {
        let n = nu.to_usize().unwrap();
        if x < T::lit(ASYMPTOTIC_LIMIT) {
            miller(n, x)
        } else {
            asymptotic(nu, x)
        }
    } else {
        half_integer(nu, x)
    }
}

/// Normalised Bessel function Λ_ν(x) = Γ(ν+1) (2/x)^ν J_ν(x), with Λ_ν(0) = 1.
///
/// Λ_{-1/2}(x) = cos x, Λ_{1/2}(x) = sin x / x.
pub fn bessel_lambda<T: Real>(nu: T, x: T) -> T {
    assert_supported(nu);
    if x < T::lit(SERIES_LIMIT) {
        return T::one() - one_minus_lambda_series(nu, x);
    }
    gamma(nu + T::one()) * (T::lit(2.0) / x).powf(nu) * bessel_j(nu, x)
}

/// 1 - Λ_ν(x) without cancellation at small `x`.
pub fn one_minus_bessel_lambda<T: Real>(nu: T, x: T) -> T {
    assert_supported(nu);
    if x < T::lit(SERIES_LIMIT) {
        one_minus_lambda_series(nu, x)
    } else {
        T::one() - bessel_lambda(nu, x)
    }
}

// Σ_{k>=1} (-1)^{k+1} (x²/4)^k Γ(ν+1) / (k! Γ(ν+k+1))
fn one_minus_lambda_series<T: Real>(nu: T, x: T) -> T {
    let q = x * x * T::lit(0.25);
    let mut term = -T::one();
    let mut sum = T::zero();
    for k in 1..200 {
        let kf = T::from_usize_lossy(k);
        term = -term * q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

fn series<T: Real>(nu: T, x: T) -> T {
    let half = x * T::lit(0.5);
    let q = -half * half;
    let mut term = half.powf(nu) / gamma(nu + T::one());
    let mut sum = term;
    for k in 1..300 {
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.5) {
            break;
        }
    }
    sum
}

fn half_integer<T: Real>(nu: T, x: T) -> T {
    let pref = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let (s, c) = x.sin_cos();
    if nu < T::zero() {
        return pref * c;
    }
    // spherical Bessel recurrence j_{n+1} = (2n+1)/x j_n - j_{n-1}
    let mut jm1 = c / x;
    let mut j = s / x;
    let mut order = T::lit(0.5);
    while order < nu {
        let n = order - T::lit(0.5);
        let next = (n + n + T::one()) / x * j - jm1;
        jm1 = j;
        j = next;
        order += T::one();
    }
    pref * x * j
}

fn miller<T: Real>(n: usize, x: T) -> T {
    let xf = x.to_f64_lossy();
    let start = ((xf.max(n as f64) + 20.0 + (40.0 * xf.max(n as f64)).sqrt()) as usize + 1) & !1;
    let big = T::max_value().sqrt();
    let two_over_x = T::lit(2.0) / x;
    let mut jp = T::zero();
    let mut j = T::min_positive_value().sqrt();
    let mut result = T::zero();
    let mut norm = T::zero();
    for k in (1..=start).rev() {
        let jm = T::from_usize_lossy(k) * two_over_x * j - jp;
        jp = j;
        j = jm;
        if j.abs() > big {
            let s = big.recip();
            j *= s;
            jp *= s;
            result *= s;
            norm *= s;
        }
        // j now holds J_{k-1}
        if k - 1 == n {
            result = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += j + j;
        }
    }
    norm += j;
    result / norm
}

fn asymptotic<T: Real>(nu: T, x: T) -> T {
    let mu = T::lit(4.0) * nu * nu;
    let eight_x = T::lit(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..200 {
        let kf = T::from_usize_lossy(2 * k - 1);
        term = term * (mu - kf * kf) / (T::from_usize_lossy(k) * eight_x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < T::epsilon() * T::lit(0.1) {
            break;
        }
    }
    let phase = (nu * T::lit(0.5) + T::lit(0.25)) * T::PI();
    let chi = x - phase;
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// k-th positive zero (k >= 1) of J_ν, by McMahon's expansion refined with Newton.
pub fn bessel_zero<T: Real>(nu: T, k: usize) -> T {
    assert!(k >= 1);
    assert_supported(nu);
    let mu = T::lit(4.0) * nu * nu;
    let beta = (T::from_usize_lossy(k) + nu * T::lit(0.5) - T::lit(0.25)) * T::PI();
    let e = T::lit(8.0) * beta;
    let mut z = beta - (mu - T::one()) / e
        - T::lit(4.0) * (mu - T::one()) * (T::lit(7.0) * mu - T::lit(31.0)) / (T::lit(3.0) * e * e * e);
    if nu.abs() == T::lit(0.5) {
        return z; // McMahon is exact for ν = ±1/2
    }
    for _ in 0..50 {
        let j = bessel_j(nu, z);
        let dj = nu / z * j - bessel_j(nu + T::one(), z);
        let step = j / dj;
        z -= step;
        if step.abs() <= T::epsilon() * z * T::lit(4.0) {
            break;
        }
    }
    z
}
