//! `latvar` command-line tool: lattice point count variance by spectral sums,
//! Monte Carlo and the asymptotic law.

mod commands;
mod output;
mod scenario;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Error reported by the tool, with its exit code (2 bad input, 1 numerical failure).
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn numerical(message: String) -> Self {
        CliError { code: 1, message }
    }
}

impl From<latvar::Error> for CliError {
    fn from(e: latvar::Error) -> Self {
        CliError { code: if e.is_input_error() { 2 } else { 1 }, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser, Debug)]
#[command(name = "latvar", version, about = "Variance of lattice point counts in randomly placed bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON scenario file; command-line flags override its keys
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Tolerance (absolute for variances, relative for Φ, |difference| for kernel-check)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Root seed for Monte Carlo
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo placements per radius
    #[arg(long)]
    pub samples: Option<u64>,
    /// Write output here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Lattice and shape selection.
#[derive(Args, Debug, Clone, Default)]
pub struct Body {
    /// Generator matrix, row-major and comma separated (default: Z^d)
    #[arg(long)]
    pub lattice: Option<String>,
    /// Dimension (1, 2 or 3) when it cannot be inferred
    #[arg(long)]
    pub dim: Option<usize>,
    /// ball:R, cube, box:a1,..,ad (half extents), interval:L or ellipsoid:s1,..,sd
    #[arg(long)]
    pub shape: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Variance table over a grid of dilations
    Variance {
        #[command(flatten)]
        body: Body,
        /// Dilations, as start:stop:step or a comma separated list
        #[arg(long)]
        radii: Option<String>,
        /// Comma separated subset of spectral, mc, asymptote, phi
        #[arg(long)]
        routes: Option<String>,
        /// Average over rotations as well as shifts
        #[arg(long)]
        isotropic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice constant C_T and the dual Epstein sum behind it
    Constant {
        /// Generator matrix, row-major and comma separated (default: Z^d)
        #[arg(long)]
        lattice: Option<String>,
        /// Dimension when no lattice is given
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Φ profile and its running Cesàro mean
    Phi {
        #[command(flatten)]
        body: Body,
        /// Dilations, as start:stop:step or a comma separated list
        #[arg(long)]
        radii: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Isotropic and axial covariogram of a shape
    Covariogram {
        /// ball:R, cube, box:a1,..,ad, interval:L or ellipsoid:s1,..,sd
        #[arg(long)]
        shape: Option<String>,
        /// Dimension when the shape does not fix it
        #[arg(long)]
        dim: Option<usize>,
        /// Distances, as start:stop:step or a comma separated list
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the kernel transform K̂₂ by quadrature with its closed form
    KernelCheck {
        /// Dimension (default: 1, 2 and 3)
        #[arg(long)]
        dim: Option<usize>,
        /// τ values, as start:stop:step or a comma separated list
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Variance { body, radii, routes, isotropic, common } => {
            commands::variance(&body, radii, routes, isotropic, &common)
        }
        Command::Constant { lattice, dim, common } => commands::constant(lattice, dim, &common),
        Command::Phi { body, radii, common } => commands::phi(&body, radii, &common),
        Command::Covariogram { shape, dim, t, common } => commands::covariogram(shape, dim, t, &common),
        Command::KernelCheck { dim, tau, common } => commands::kernel_check(dim, tau, &common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
