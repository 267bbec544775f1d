use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::lattice::{lattice_constant, Lattice};
use crate::real::{unit_ball_volume, unit_sphere_area, Real};
use crate::spectral::{mean_decay_coefficient, RadialProfile, SpectralDensity};
use crate::variance::spectral::{
    dual_epstein_total, isotropic_lattice_side, lattice_side_points, variance_isotropic, DualShells,
    LATTICE_SUM_POINTS, DUAL_POINT_CAP,
};

/// Φ sampled on a grid of dilations, with its running Cesàro mean.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiProfile<T> {
    pub radii: Vec<T>,
    pub phi: Vec<T>,
    /// `(1/r_i) ∫_0^{r_i} Φ` by the trapezoid rule, Φ constant on `(0, r_0]`.
    pub running_mean: Vec<T>,
    /// Dual radius of the grouped shells (0 when no radius needed them).
    pub truncation_radius: T,
    /// Largest bound on the error of Φ from the tail completion.
    pub tail_bound: T,
    /// Largest difference between Φ as a variance ratio and as a weighted
    /// average of Ψ over the dual lattice, on the radii where it was checked.
    pub identity_residual: T,
}

/// Running trapezoid means `(1/t_i) ∫_0^{t_i} v`, with `v` extended
/// constantly on `(0, t_0]`.
pub fn cesaro_mean<T: Real>(t: &[T], v: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(t.len());
    let mut integral = T::zero();
    for i in 0..t.len() {
        integral += if i == 0 { t[0] * v[0] } else { (t[i] - t[i - 1]) * T::lit(0.5) * (v[i - 1] + v[i]) };
        out.push(if t[i] > T::zero() { integral / t[i] } else { v[i] });
    }
    out
}

/// `Ψ(t) = 2π²κ_{d-1} t^{d+1} γ̄̂_D(t) / (−γ̄'_D(0))` on `t_grid`.
///
/// The returned profile is monotone-cubic with a constant tail equal to the
/// mean of Ψ over the upper half of the grid.
pub fn psi_profile<T: Real>(shape: &Shape<T>, t_grid: &[T]) -> Result<RadialProfile<T>> {
    check_grid(t_grid, "t")?;
    let d = shape.dim();
    let cbar = mean_decay_coefficient(shape);
    let density = SpectralDensity::new(shape.clone());
    let values: Vec<T> = t_grid.par_iter().map(|&t| t.powi(d as i32 + 1) * density.value(t) / cbar).collect();
    let last = t_grid[t_grid.len() - 1];
    Ok(RadialProfile::new(t_grid.to_vec(), values, T::zero())?.fit_mean_tail(last * T::lit(0.5)))
}

/// `Φ(r) = Var_iso(r) / (C_T H^{d-1}(∂D) r^{d-1})` on `r_grid`.
///
/// `tol` bounds the relative error of Φ from the dual tail completion. Small
/// dilations are summed exactly on the lattice side; the rest share one set
/// of dual shells, and on a subsample of those radii the ratio is compared
/// with the Ψ-average form `Σ|ξ|^{-d-1}Ψ(r|ξ|) / Σ|ξ|^{-d-1}`.
pub fn phi_profile<T: Real>(lat: &Lattice<T>, shape: &Shape<T>, r_grid: &[T], tol: T) -> Result<PhiProfile<T>> {
    check_grid(r_grid, "r")?;
    if shape.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), found: shape.dim() });
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", tol)));
    }
    let d = shape.dim();
    let c_t = lattice_constant(lat, T::lit(1e-13).max(T::epsilon()))?.value;
    let norm = c_t * shape.surface_measure();
    let scale = |r: T| norm * r.powi(d as i32 - 1);

    if d == 1 {
        let phi = r_grid
            .iter()
            .map(|&r| Ok(variance_isotropic(lat, shape, r, tol)?.value / scale(r)))
            .collect::<Result<Vec<T>>>()?;
        let running_mean = cesaro_mean(r_grid, &phi);
        return Ok(PhiProfile {
            radii: r_grid.to_vec(),
            phi,
            running_mean,
            truncation_radius: T::zero(),
            tail_bound: T::zero(),
            identity_residual: T::zero(),
        });
    }

    let first_dual = r_grid.iter().position(|&r| lattice_side_points(lat, shape, r) > LATTICE_SUM_POINTS);
    let alpha = lat.intensity();
    let cbar = mean_decay_coefficient(shape);
    let mut shells = None;
    let mut density = SpectralDensity::new(shape.clone());
    if let Some(k) = first_dual {
        let total = dual_epstein_total(lat)?;
        // Σ_{|ξ|>R} |ξ|^{-d-1} ≈ dκ_d det A / R
        let r_min = r_grid[k];
        let radius = (unit_sphere_area::<T>(d) * lat.determinant() / (tol * total))
            .max(T::lit(8.0) / (r_min * shape.bounding_radius()));
        let points = unit_ball_volume::<f64>(d) * radius.to_f64_lossy().powi(d as i32) / alpha.to_f64_lossy();
        if points > DUAL_POINT_CAP {
            return Err(Error::TailBoundFailure {
                tail_bound: f64::NAN,
                tolerance: tol.to_f64_lossy(),
                radius: radius.to_f64_lossy(),
            });
        }
        if !shape.is_rotation_invariant() {
            let rho_max = r_grid[r_grid.len() - 1] * radius * T::lit(1.001);
            let step = (T::lit(40.0) * shape.bounding_radius()).recip();
            density = SpectralDensity::tabulated(shape.clone(), rho_max, step);
        }
        shells = Some(DualShells::build(lat, radius, total)?);
    }

    struct Row<T> {
        phi: T,
        bound: T,
        residual: T,
    }
    let rows = r_grid
        .par_iter()
        .enumerate()
        .map(|(i, &r)| -> Result<Row<T>> {
            let sh = match (&shells, first_dual) {
                (Some(sh), Some(k)) if i >= k => sh,
                _ => {
                    let v = isotropic_lattice_side(lat, shape, r)?.value;
                    return Ok(Row { phi: v / scale(r), bound: T::zero(), residual: T::zero() });
                }
            };
            let (partial, envelope) = sh.evaluate(&density, r);
            let var = alpha * alpha * (r.powi(2 * d as i32) * partial + cbar * r.powi(d as i32 - 1) * sh.tail);
            let phi = var / scale(r);
            let bound = (envelope - cbar).max(cbar) * sh.tail / (cbar * sh.total);
            let residual = if (i - first_dual.unwrap_or(0)) % 7 == 0 {
                let p = -T::from_usize_lossy(d + 1);
                let mut weighted = T::zero();
                for (&n, &m) in sh.norms.iter().zip(&sh.multiplicity) {
                    let t = r * n;
                    let psi = t.powi(d as i32 + 1) * density.value(t) / cbar;
                    weighted += m * n.powf(p) * psi;
                }
                ((weighted + sh.tail) / sh.total - phi).abs()
            } else {
                T::zero()
            };
            Ok(Row { phi, bound, residual })
        })
        .collect::<Result<Vec<_>>>()?;

    let phi: Vec<T> = rows.iter().map(|x| x.phi).collect();
    let tail_bound = rows.iter().fold(T::zero(), |m, x| m.max(x.bound));
    let identity_residual = rows.iter().fold(T::zero(), |m, x| m.max(x.residual));
    if identity_residual > T::lit(1e-6) {
        return Err(Error::NonConvergence { what: "Φ identity", estimate: identity_residual.to_f64_lossy() });
    }
    let running_mean = cesaro_mean(r_grid, &phi);
    Ok(PhiProfile {
        radii: r_grid.to_vec(),
        phi,
        running_mean,
        truncation_radius: shells.as_ref().map_or(T::zero(), |s| s.radius),
        tail_bound,
        identity_residual,
    })
}

fn check_grid<T: Real>(grid: &[T], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput(format!("{name} grid is empty")));
    }
    if !(grid[0] > T::zero()) || grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[grid.len() - 1].is_finite() {
        return Err(Error::InvalidInput(format!("{name} grid must be positive and strictly increasing")));
    }
    Ok(())
}
