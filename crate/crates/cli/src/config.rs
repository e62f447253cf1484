//! Command-line options and the optional TOML config file.
//!
//! Every option is optional so that a value given on the command line can
//! override one from `--config`, which in turn overrides the built-in
//! default of each subcommand.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use zerosum::QuadratureSpec;

use crate::CliError;

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// N values (comma separated).
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Interval lengths H (comma separated).
    #[arg(long = "h", value_delimiter = ',')]
    pub h: Option<Vec<u64>>,
    /// Cesàro order k.
    #[arg(long)]
    pub k: Option<f64>,
    /// Power ℓ of the exponential sum.
    #[arg(long)]
    pub ell: Option<u32>,
    /// Truncation points ξ of the mean squares.
    #[arg(long, value_delimiter = ',')]
    pub xi_grid: Option<Vec<f64>>,
    /// Height T of the zero sums (default: the whole table).
    #[arg(long)]
    pub height: Option<f64>,
    /// Height T₂ of the double zero sum (default: `--height`).
    #[arg(long)]
    pub t2: Option<f64>,
    /// Number of ℓ terms in the Bessel sums.
    #[arg(long)]
    pub bessel_ell_max: Option<usize>,
    /// Zero ordinate file.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Sieve limit (default: the smallest limit the run needs).
    #[arg(long)]
    pub sieve_limit: Option<u64>,
    /// Output CSV path (default: standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all hardware threads).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Short-interval problem: HUA, P1P2SQ, TWO_PSQ or PSQ_SQ.
    #[arg(long)]
    pub kind: Option<String>,
    /// Mean-square variant: tilde, classical or omega.
    #[arg(long)]
    pub variant: Option<String>,
    /// Bound reported by `meansquare --variant tilde`: rh or unconditional.
    #[arg(long)]
    pub bound: Option<String>,
    /// Constant c₁ of the unconditional bound.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Points α of `expsum-compare`.
    #[arg(long, value_delimiter = ',')]
    pub alpha_grid: Option<Vec<f64>>,
    /// Exponent μ of the segment Laplace check.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Scale N of the segment Laplace check (default: each n).
    #[arg(long)]
    pub big_n: Option<u64>,
    /// Real part of s in the line-integral Laplace check.
    #[arg(long)]
    pub s_re: Option<f64>,
    /// Imaginary part of s in the line-integral Laplace check.
    #[arg(long)]
    pub s_im: Option<f64>,
    /// Abscissa a of the line-integral Laplace check.
    #[arg(long)]
    pub a: Option<f64>,
    /// Values of D; selects the line-integral Laplace check.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d_grid: Option<Vec<f64>>,
    /// Arguments u of `bessel-check`.
    #[arg(long, value_delimiter = ',')]
    pub u_grid: Option<Vec<f64>>,
    /// Orders ν of `bessel-check` as `re` or `re:im` (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Option<Vec<String>>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub points_per_panel: Option<usize>,
    #[arg(long)]
    pub max_panels: Option<usize>,
    #[arg(long)]
    pub osc_freq_cap: Option<f64>,
    /// TOML file with defaults for any of the options above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Options { $($f: $a.$f.or($b.$f),)* config: $a.config }
    };
}

impl Options {
    /// Fields set here win over those in `file`.
    pub fn merge(self, file: Options) -> Options {
        prefer!(self, file; n, h, k, ell, xi_grid, height, t2, bessel_ell_max, zeros,
            sieve_limit, output, threads, kind, variant, bound, c1, alpha_grid, mu, big_n,
            s_re, s_im, a, d_grid, u_grid, nu, abs_tol, rel_tol, points_per_panel,
            max_panels, osc_freq_cap)
    }

    /// Reads `--config` if given and merges it underneath the flags.
    pub fn resolve(self) -> Result<Options, CliError> {
        match &self.config {
            None => Ok(self),
            Some(path) => {
                let file = read_config(path)?;
                Ok(self.merge(file))
            }
        }
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        let d = QuadratureSpec::default();
        let q = QuadratureSpec {
            max_panels: self.max_panels.unwrap_or(d.max_panels),
            points_per_panel: self.points_per_panel.unwrap_or(d.points_per_panel),
            osc_freq_cap: self.osc_freq_cap.unwrap_or(d.osc_freq_cap),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
        };
        q.validate()?;
        Ok(q)
    }
}

fn read_config(path: &Path) -> Result<Options, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
}

/// A grid from the options or the default, rejecting empty lists.
pub fn grid<T: Clone>(value: &Option<Vec<T>>, default: &[T], name: &str) -> Result<Vec<T>, CliError> {
    let v = value.clone().unwrap_or_else(|| default.to_vec());
    if v.is_empty() {
        return Err(CliError::Validation(format!("--{name} must not be empty")));
    }
    Ok(v)
}
