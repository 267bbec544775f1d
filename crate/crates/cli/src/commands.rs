use latvar::geometry::{covariogram as directional_covariogram, gamma_prime_zero, isotropic_covariogram, Rotation};
use latvar::lattice::lattice_constant;
use latvar::spectral::{k2hat_closed, k2hat_numeric};
use latvar::variance::{asymptote, mean_count, monte_carlo, phi_profile, variance_isotropic, variance_spectral};
use latvar::{Lattice64, Shape64, Vector64};
use serde_json::{Map, Value};

use crate::output::{csv_number, emit, json_number, Cell, Table};
use crate::scenario::{
    build_lattice, build_shape, parse_format, parse_grid, parse_routes, resolve_dim, Format, GridSpec, Routes,
    ScenarioFile,
};
use crate::{Body, CliError, Common};

const DEFAULT_SAMPLES: u64 = 10_000;

/// Per-row Monte Carlo seed: row `i` uses `seed ^ (i · 0x9E3779B97F4A7C15)`.
pub fn row_seed(seed: u64, row: usize) -> u64 {
    seed ^ (row as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Settings {
    format: Format,
    tol: f64,
    seed: Option<u64>,
    samples: u64,
}

fn settings(common: &Common, file: &ScenarioFile, format: Format, tol: f64) -> Result<Settings, CliError> {
    let format = match common.format.as_deref().or(file.format.as_deref()) {
        Some(f) => parse_format(f)?,
        None => format,
    };
    let tol = common.tol.or(file.tol).unwrap_or(tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::input(format!("tolerance must be positive, got {tol}")));
    }
    let samples = common.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    Ok(Settings { format, tol, seed: common.seed.or(file.seed), samples })
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(&GridSpec::Text(s.to_string())).or_else(|_| {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::input(format!("not a number: '{}'", x.trim()))))
            .collect()
    })
}

fn grid_from(flag: Option<String>, file: Option<&GridSpec>, default: Option<&str>, what: &str) -> Result<Vec<f64>, CliError> {
    match (flag, file, default) {
        (Some(s), _, _) => parse_grid(&GridSpec::Text(s)),
        (None, Some(g), _) => parse_grid(g),
        (None, None, Some(d)) => parse_grid(&GridSpec::Text(d.to_string())),
        _ => Err(CliError::input(format!("{what} not given"))),
    }
}

fn body_from(body: &Body, file: &ScenarioFile) -> Result<(Lattice64, Shape64), CliError> {
    let entries = match (&body.lattice, &file.lattice) {
        (Some(s), _) => Some(parse_list(s)?),
        (None, Some(v)) => Some(v.clone()),
        _ => None,
    };
    let shape_spec = body
        .shape
        .clone()
        .or_else(|| file.shape.clone())
        .ok_or_else(|| CliError::input("shape not given".into()))?;
    let d = resolve_dim(body.dim.or(file.dim), entries.as_deref(), Some(&shape_spec))?;
    Ok((build_lattice(entries.as_deref(), d)?, build_shape(&shape_spec, d)?))
}

pub fn variance(
    body: &Body,
    radii: Option<String>,
    routes: Option<String>,
    isotropic: bool,
    common: &Common,
) -> Result<(), CliError> {
    let file = ScenarioFile::load(common.scenario.as_deref())?;
    let set = settings(common, &file, Format::Csv, 1e-2)?;
    let (lat, shape) = body_from(body, &file)?;
    let radii = grid_from(radii, file.radii.as_ref(), None, "radii")?;
    if radii[0] <= 0.0 {
        return Err(CliError::input("radii must be positive".into()));
    }
    let routes: Routes = match (routes, &file.routes) {
        (Some(s), _) => parse_routes(&s.split(',').map(str::to_string).collect::<Vec<_>>())?,
        (None, Some(v)) => parse_routes(v)?,
        (None, None) => parse_routes(&["spectral".into(), "asymptote".into(), "phi".into()])?,
    };
    let isotropic = isotropic || file.isotropic.unwrap_or(false);
    let seed = match (routes.mc, set.seed) {
        (true, None) => return Err(CliError::input("the mc route needs --seed".into())),
        (_, s) => s.unwrap_or(0),
    };
    let d = lat.dim();
    let phi = if routes.phi { Some(phi_profile(&lat, &shape, &radii, set.tol)?) } else { None };
    let mut table = Table::new(&["r", "mean", "var_spectral", "var_mc", "mc_se", "asymptote", "phi", "phi_runmean"]);
    for (i, &r) in radii.iter().enumerate() {
        let spectral = if routes.spectral {
            let v = if isotropic {
                variance_isotropic(&lat, &shape, r, set.tol)?
            } else {
                variance_spectral(&lat, &shape, r, &Rotation::identity(d), set.tol)?
            };
            Some(v.value)
        } else {
            None
        };
        let (mc, se) = if routes.mc {
            let s = monte_carlo(&lat, &shape, r, isotropic, set.samples, row_seed(seed, i))?;
            (Some(s.variance.value), Some(s.variance.uncertainty))
        } else {
            (None, None)
        };
        let asym = if routes.asymptote { Some(asymptote(&lat, &shape, r)?.value) } else { None };
        table.push(vec![
            Cell::Num(r),
            Cell::Num(mean_count(&lat, &shape, r)),
            spectral.into(),
            mc.into(),
            se.into(),
            asym.into(),
            phi.as_ref().map(|p| p.phi[i]).into(),
            phi.as_ref().map(|p| p.running_mean[i]).into(),
        ]);
    }
    emit(&table.render(set.format), common.out.as_deref())
}

pub fn constant(lattice: Option<String>, dim: Option<usize>, common: &Common) -> Result<(), CliError> {
    let file = ScenarioFile::load(common.scenario.as_deref())?;
    let set = settings(common, &file, Format::Json, 1e-12)?;
    let entries = match (&lattice, &file.lattice) {
        (Some(s), _) => Some(parse_list(s)?),
        (None, Some(v)) => Some(v.clone()),
        _ => None,
    };
    let d = resolve_dim(dim.or(file.dim), entries.as_deref(), None)?;
    let lat = build_lattice(entries.as_deref(), d)?;
    let c = lattice_constant(&lat, set.tol)?;
    let fields = [
        ("c_t", c.value),
        ("epstein_value", c.sum.value),
        ("truncation_radius", c.sum.truncation_radius),
        ("tail_bound", c.sum.tail_bound),
    ];
    let text = match set.format {
        Format::Json => {
            let mut obj = Map::new();
            for (k, v) in fields {
                obj.insert(k.to_string(), json_number(v));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let values: Vec<String> = fields.iter().map(|f| csv_number(f.1)).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
    };
    emit(&text, common.out.as_deref())
}

pub fn phi(body: &Body, radii: Option<String>, common: &Common) -> Result<(), CliError> {
    let file = ScenarioFile::load(common.scenario.as_deref())?;
    let set = settings(common, &file, Format::Csv, 1e-2)?;
    let (lat, shape) = body_from(body, &file)?;
    let radii = grid_from(radii, file.radii.as_ref(), None, "radii")?;
    let p = phi_profile(&lat, &shape, &radii, set.tol)?;
    let mut table = Table::new(&["r", "phi", "phi_runmean"]);
    for i in 0..radii.len() {
        table.push(vec![Cell::Num(p.radii[i]), Cell::Num(p.phi[i]), Cell::Num(p.running_mean[i])]);
    }
    emit(&table.render(set.format), common.out.as_deref())
}

pub fn covariogram(shape: Option<String>, dim: Option<usize>, t: Option<String>, common: &Common) -> Result<(), CliError> {
    let file = ScenarioFile::load(common.scenario.as_deref())?;
    let set = settings(common, &file, Format::Csv, 1e-2)?;
    let spec = shape.or_else(|| file.shape.clone()).ok_or_else(|| CliError::input("shape not given".into()))?;
    let d = resolve_dim(dim.or(file.dim), None, Some(&spec))?;
    let shape = build_shape(&spec, d)?;
    let default = format!("0:{}:{}", 2.0 * shape.bounding_radius(), shape.bounding_radius() / 20.0);
    let ts = match (t, file.t.as_ref()) {
        (Some(s), _) => parse_grid(&GridSpec::Text(s))?,
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => parse_grid(&GridSpec::Text(default))?,
    };
    if ts[0] < 0.0 {
        return Err(CliError::input("distances must be nonnegative".into()));
    }
    let slope = gamma_prime_zero(&shape);
    let mut table = Table::new(&["t", "gamma_iso", "gamma_axis", "slope_at_zero"]);
    for &x in &ts {
        let axis = directional_covariogram(&shape, &Vector64::unit(d, 0).scale(x));
        table.push(vec![Cell::Num(x), Cell::Num(isotropic_covariogram(&shape, x)), Cell::Num(axis), Cell::Num(slope)]);
    }
    emit(&table.render(set.format), common.out.as_deref())
}

pub fn kernel_check(dim: Option<usize>, tau: Option<String>, common: &Common) -> Result<(), CliError> {
    let file = ScenarioFile::load(common.scenario.as_deref())?;
    let set = settings(common, &file, Format::Csv, 1e-6)?;
    let dims: Vec<usize> = match dim.or(file.dim) {
        Some(d) if (1..=3).contains(&d) => vec![d],
        Some(d) => return Err(CliError::input(format!("dimension {d} not supported (1, 2 or 3)"))),
        None => vec![1, 2, 3],
    };
    let taus = grid_from(tau, file.tau.as_ref(), Some("-5:5:0.25"), "tau")?;
    let mut table = Table::new(&[
        "d",
        "tau",
        "k2hat_numeric_re",
        "k2hat_numeric_im",
        "k2hat_closed_re",
        "k2hat_closed_im",
        "abs_diff",
    ]);
    let mut worst = 0.0f64;
    let mut smallest = f64::INFINITY;
    for &d in &dims {
        for &t in &taus {
            let n = k2hat_numeric(t, d)?;
            let c = k2hat_closed(t, d)?;
            let diff = (n - c).norm();
            worst = worst.max(diff);
            smallest = smallest.min(c.norm());
            table.push(vec![
                Cell::Int(d as i64),
                Cell::Num(t),
                Cell::Num(n.re),
                Cell::Num(n.im),
                Cell::Num(c.re),
                Cell::Num(c.im),
                Cell::Num(diff),
            ]);
        }
    }
    emit(&table.render(set.format), common.out.as_deref())?;
    if worst > set.tol || smallest < 1e-8 {
        return Err(CliError::numerical(format!(
            "kernel check failed: max |difference| {worst:e} (limit {:e}), min |closed| {smallest:e}",
            set.tol
        )));
    }
    Ok(())
}
