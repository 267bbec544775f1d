//! Error function and the upper incomplete gamma function.

use crate::real::Real;
use crate::spectral::gamma::gamma;

/// erf(x).
pub fn erf<T: Real>(x: T) -> T {
    if x < T::zero() {
        return -erf(-x);
    }
    if x <= T::lit(3.0) {
        erf_series(x)
    } else {
        T::one() - erfc_cf(x)
    }
}

/// erfc(x) = 1 - erf(x), accurate in the tail.
pub fn erfc<T: Real>(x: T) -> T {
    if x < T::lit(1.5) {
        T::one() - erf(x)
    } else {
        erfc_cf(x)
    }
}

// erf(x) = 2/√π e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!; all terms positive
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = T::zero();
    for _ in 0..200 {
        n += T::one();
        term = term * (x2 + x2) / (n + n + T::one());
        sum += term;
        if term < sum * T::epsilon() {
            break;
        }
    }
    sum * (-x2).exp() * T::lit(2.0) / T::PI().sqrt()
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz
fn erfc_cf<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for k in 1..500 {
        let a = T::from_usize_lossy(k) * T::lit(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (T::PI().sqrt() * f)
}

/// Upper incomplete gamma Γ(a, x) for real `a` (any sign) and `x > 0`.
pub fn upper_incomplete_gamma<T: Real>(a: T, x: T) -> T {
    assert!(x > T::zero(), "upper incomplete gamma needs x > 0");
    if x >= a + T::one() {
        return incgamma_cf(a, x);
    }
    if a > T::zero() {
        return gamma(a) - lower_incgamma_series(a, x);
    }
    // a <= 0 and x < 1: climb to a positive order, then Γ(b,x) = (Γ(b+1,x) - x^b e^{-x}) / b
    let mut orders = Vec::new();
    let mut b = a;
    while b <= T::zero() {
        if b == T::zero() {
            break;
        }
        orders.push(b);
        b += T::one();
    }
    let mut value = if b == T::zero() { exp_integral_e1(x) } else { upper_incomplete_gamma(b, x) };
    for &o in orders.iter().rev() {
        value = (value - x.powf(o) * (-x).exp()) / o;
    }
    value
}

fn lower_incgamma_series<T: Real>(a: T, x: T) -> T {
    let mut term = T::one() / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..1000 {
        ap += T::one();
        term = term * x / ap;
        sum += term;
        if term.abs() < sum.abs() * T::epsilon() {
            break;
        }
    }
    sum * (a * x.ln() - x).exp()
}

// Γ(a,x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - 2(2-a)/(x + 5 - a - ...)))
fn incgamma_cf<T: Real>(a: T, x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..2000 {
        let fi = T::from_usize_lossy(i);
        let an = -fi * (fi - a);
        b += T::lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h *= delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

// E1(x) for 0 < x < 1 by its power series
fn exp_integral_e1<T: Real>(x: T) -> T {
    let euler = T::lit(0.577_215_664_901_532_9);
    let mut sum = T::zero();
    let mut term = T::one();
    for k in 1..200 {
        let kf = T::from_usize_lossy(k);
        term = -term * x / kf;
        let t = term / kf;
        sum += t;
        if t.abs() < T::epsilon() * sum.abs().max(T::min_positive_value()) {
            break;
        }
    }
    -euler - x.ln() - sum
}
