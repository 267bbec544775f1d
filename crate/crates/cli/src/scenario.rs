use std::path::Path;

use latvar::lattice::{make_lattice, Lattice};
use latvar::linalg::Matrix;
use latvar::{Lattice64, Shape64};
use serde::Deserialize;

use crate::CliError;

/// Contents of a `--scenario` JSON file. Every key is optional; flags given on
/// the command line take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub lattice: Option<Vec<f64>>,
    pub dim: Option<usize>,
    pub shape: Option<String>,
    pub radii: Option<GridSpec>,
    pub routes: Option<Vec<String>>,
    pub isotropic: Option<bool>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub format: Option<String>,
    pub tau: Option<GridSpec>,
    pub t: Option<GridSpec>,
}

/// A grid given either as `start:stop:step` or as an explicit list.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    List(Vec<f64>),
}

impl ScenarioFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read scenario {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("bad scenario {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_format(s: &str) -> Result<Format, CliError> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::input(format!("unknown format '{other}' (expected csv or json)"))),
    }
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::input(format!("not a number: '{}'", x.trim()))))
        .collect()
}

/// Expands a grid; `a:b:h` yields `a, a+h, ...` up to `b` inclusive.
pub fn parse_grid(spec: &GridSpec) -> Result<Vec<f64>, CliError> {
    let values = match spec {
        GridSpec::List(v) => v.clone(),
        GridSpec::Text(s) if s.contains(':') => {
            let parts = s.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>();
            let Ok(parts) = parts else { return Err(CliError::input(format!("bad grid '{s}'"))) };
            let [a, b, h] = parts[..] else { return Err(CliError::input(format!("grid '{s}' needs start:stop:step"))) };
            if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(CliError::input(format!("bad grid '{s}'")));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            if n > 10_000_000 {
                return Err(CliError::input(format!("grid '{s}' is too long")));
            }
            (0..=n).map(|i| a + i as f64 * h).collect()
        }
        GridSpec::Text(s) => parse_numbers(s)?,
    };
    if values.is_empty() || values.iter().any(|x| !x.is_finite()) || values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::input("grid must be nonempty, finite and strictly increasing".into()));
    }
    Ok(values)
}

pub fn parse_routes(list: &[String]) -> Result<Routes, CliError> {
    let mut routes = Routes::default();
    for r in list {
        match r.trim() {
            "spectral" => routes.spectral = true,
            "mc" => routes.mc = true,
            "asymptote" => routes.asymptote = true,
            "phi" => routes.phi = true,
            "" => {}
            other => {
                return Err(CliError::input(format!("unknown route '{other}' (spectral, mc, asymptote, phi)")))
            }
        }
    }
    Ok(routes)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Routes {
    pub spectral: bool,
    pub mc: bool,
    pub asymptote: bool,
    pub phi: bool,
}

/// Dimension from, in order: the explicit value, the lattice, the shape arity.
pub fn resolve_dim(explicit: Option<usize>, lattice: Option<&[f64]>, shape: Option<&str>) -> Result<usize, CliError> {
    let from_lattice = match lattice {
        Some(entries) => {
            let d = (entries.len() as f64).sqrt().round() as usize;
            if d * d != entries.len() || d == 0 {
                return Err(CliError::input(format!("lattice needs d² entries, got {}", entries.len())));
            }
            Some(d)
        }
        None => None,
    };
    let from_shape = shape.and_then(shape_arity);
    let d = explicit
        .or(from_lattice)
        .or(from_shape)
        .ok_or_else(|| CliError::input("dimension not given (use --dim, --lattice or an explicit shape)".into()))?;
    for (what, other) in [("lattice", from_lattice), ("shape", from_shape)] {
        if let Some(o) = other {
            if o != d {
                return Err(CliError::input(format!("{what} has dimension {o}, expected {d}")));
            }
        }
    }
    if !(1..=3).contains(&d) {
        return Err(CliError::input(format!("dimension {d} not supported (1, 2 or 3)")));
    }
    Ok(d)
}

fn shape_arity(spec: &str) -> Option<usize> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    match kind.trim() {
        "box" | "ellipsoid" => Some(args.split(',').count()),
        "interval" => Some(1),
        _ => None,
    }
}

pub fn build_lattice(entries: Option<&[f64]>, d: usize) -> Result<Lattice64, CliError> {
    match entries {
        None => Ok(Lattice::integer(d)),
        Some(e) => {
            let m = Matrix::from_row_major(d, e).map_err(CliError::from)?;
            make_lattice(m).map_err(CliError::from)
        }
    }
}

/// Shapes: `ball:R`, `cube`, `box:a1,..,ad` (half extents), `interval:L`,
/// `ellipsoid:s1,..,sd`.
pub fn build_shape(spec: &str, d: usize) -> Result<Shape64, CliError> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let shape = match kind.trim() {
        "ball" => {
            let r = parse_numbers(args)?;
            let [radius] = r[..] else { return Err(CliError::input("ball takes one radius".into())) };
            Shape64::ball(d, radius)
        }
        "cube" if args.trim().is_empty() => Shape64::unit_cube(d),
        "box" => Shape64::cuboid(&parse_numbers(args)?),
        "interval" => {
            let l = parse_numbers(args)?;
            let [len] = l[..] else { return Err(CliError::input("interval takes one length".into())) };
            Shape64::cuboid(&[len / 2.0])
        }
        "ellipsoid" => Shape64::ellipsoid(&parse_numbers(args)?),
        _ => return Err(CliError::input(format!("unknown shape '{spec}'"))),
    }
    .map_err(CliError::from)?;
    if shape.dim() != d {
        return Err(CliError::input(format!("shape has dimension {}, expected {d}", shape.dim())));
    }
    Ok(shape)
}
