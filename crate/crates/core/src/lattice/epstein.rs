use crate::error::{Error, Result};
use crate::lattice::point_lattice::{points_in_ball, Lattice};
use crate::linalg::Matrix;
use crate::real::{unit_sphere_area, Real};
use crate::special::upper_incomplete_gamma;
use crate::spectral::gamma;

/// A truncated lattice sum with a bound on the omitted part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSum<T> {
    pub value: T,
    pub truncation_radius: T,
    pub tail_bound: T,
}

/// The lattice constant together with the dual Epstein sum it is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeConstant<T> {
    pub value: T,
    pub sum: LatticeSum<T>,
}

/// `Σ_{n≠0} |B n|^{-s}` over the dual lattice, `B = A^{-T}`, for `s > d`.
///
/// Uses the theta-function splitting: both the direct and the Poisson-dual
/// part decay like incomplete gamma functions, so a few shells suffice.
/// The returned tail bound is below `tol`.
pub fn epstein_sum<T: Real>(lat: &Lattice<T>, s: T, tol: T) -> Result<LatticeSum<T>> {
    let d = lat.dim();
    check_exponent(s, d)?;
    // the lattice summed over is generated by B; its Poisson dual by A
    let b = *lat.dual_generator();
    let b_inv = lat.generator().transpose();
    theta_split(&b, &b_inv, lat.generator(), s, tol)
}

/// Same sum by plain shell summation up to `radius` with the integral tail
/// `(dκ_d / det B) R^{d-s} / (s - d)` added; the bound is twice that integral.
pub fn epstein_sum_shells<T: Real>(lat: &Lattice<T>, s: T, radius: T) -> Result<LatticeSum<T>> {
    let d = lat.dim();
    check_exponent(s, d)?;
    let pts = lat.dual_points_in_ball(radius)?;
    let partial: T = pts.iter().map(|v| v.norm().powf(-s)).sum();
    let dual_covolume = lat.intensity();
    let integral = unit_sphere_area::<T>(d) / dual_covolume * radius.powf(T::from_usize_lossy(d) - s)
        / (s - T::from_usize_lossy(d));
    Ok(LatticeSum { value: partial + integral, truncation_radius: radius, tail_bound: integral + integral })
}

/// `C_T = α² Σ_{n≠0} |A^{-T} n|^{-d-1} / (2π² d κ_d)`.
///
/// The factor `α² = (det A)^{-2}` makes `C_T H^{d-1}(∂D) r^{d-1}` the
/// placement-averaged variance of the count itself; it is 1 for unimodular
/// lattices.
pub fn lattice_constant<T: Real>(lat: &Lattice<T>, tol: T) -> Result<LatticeConstant<T>> {
    let d = lat.dim();
    let alpha = lat.intensity();
    let norm = T::lit(2.0) * T::PI() * T::PI() * unit_sphere_area::<T>(d);
    let scale = alpha * alpha / norm;
    let sum = epstein_sum(lat, T::from_usize_lossy(d + 1), tol / scale)?;
    Ok(LatticeConstant { value: scale * sum.value, sum })
}

fn check_exponent<T: Real>(s: T, d: usize) -> Result<()> {
    if s > T::from_usize_lossy(d) && s.is_finite() {
        Ok(())
    } else {
        Err(Error::DivergentExponent { exponent: s.to_f64_lossy(), dim: d })
    }
}

// Σ_{n≠0} |G n|^{-s} with `g_inv = G^{-1}` and `h = G^{-T}` generating the dual.
fn theta_split<T: Real>(g: &Matrix<T>, g_inv: &Matrix<T>, h: &Matrix<T>, s: T, tol: T) -> Result<LatticeSum<T>> {
    let d = g.dim();
    let df = T::from_usize_lossy(d);
    let pi = T::PI();
    let covolume = g.determinant().abs();
    let a = covolume.powf(-T::lit(2.0) / df);
    let half_s = s * T::lit(0.5);
    let dual_order = (df - s) * T::lit(0.5);
    let scale = pi.powf(half_s) / gamma(half_s);
    let h_inv = g.transpose();

    let mut cutoff = T::lit(46.0);
    loop {
        let r_direct = (cutoff / (pi * a)).sqrt();
        let r_dual = (cutoff * a / pi).sqrt();
        let tail = scale * theta_tail_bound(d, covolume, a, s, r_direct, r_dual);
        if tail <= tol || cutoff > T::lit(400.0) {
            let direct: T = points_in_ball(g, g_inv, r_direct)?
                .iter()
                .map(|(v, _)| {
                    let q = pi * v.norm_squared();
                    q.powf(-half_s) * upper_incomplete_gamma(half_s, a * q)
                })
                .sum();
            let dual: T = points_in_ball(h, &h_inv, r_dual)?
                .iter()
                .map(|(w, _)| {
                    let q = pi * w.norm_squared();
                    q.powf(-dual_order) * upper_incomplete_gamma(dual_order, q / a)
                })
                .sum();
            let constant = T::lit(2.0) * a.powf(-dual_order) / ((s - df) * covolume)
                - T::lit(2.0) * a.powf(half_s) / s;
            let value = scale * (direct + dual / covolume + constant);
            if tail > tol {
                return Err(Error::TailBoundFailure {
                    tail_bound: tail.to_f64_lossy(),
                    tolerance: tol.to_f64_lossy(),
                    radius: r_direct.to_f64_lossy(),
                });
            }
            return Ok(LatticeSum { value, truncation_radius: r_direct.max(r_dual), tail_bound: tail });
        }
        cutoff += T::lit(10.0);
    }
}

// Bound on the omitted shells of both theta halves, from Γ(b, x) <= C x^{b-1} e^{-x}
// and a lattice-point density inflated by 2.
fn theta_tail_bound<T: Real>(d: usize, covolume: T, a: T, s: T, r1: T, r2: T) -> T {
    let pi = T::PI();
    let df = T::from_usize_lossy(d);
    let area = unit_sphere_area::<T>(d);
    let gamma_factor = |b: T, x: T| if b > T::one() { T::one() / (T::one() - (b - T::one()) / x) } else { T::one() };
    // ∫_R^∞ ρ^{d-3} e^{-cρ²} dρ <= R^{d-3} e^{-cR²} / (2cR) for d <= 3
    let gauss_tail = |c: T, r: T| r.powf(df - T::lit(3.0)) * (-c * r * r).exp() / (T::lit(2.0) * c * r);
    let b1 = s * T::lit(0.5);
    let direct = T::lit(2.0) * area / covolume * gamma_factor(b1, pi * a * r1 * r1) * a.powf(b1 - T::one()) / pi
        * gauss_tail(pi * a, r1);
    let b2 = (df - s) * T::lit(0.5);
    let dual = T::lit(2.0) * area * a.powf(T::one() - b2) / pi * gauss_tail(pi / a, r2);
    direct + dual
}
