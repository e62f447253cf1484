//! One function per subcommand. Each validates its inputs, loads the sieve
//! and zero table, evaluates its grid on the worker pool and returns the
//! finished table; nothing is written here.

use std::f64::consts::PI;

use log::{debug, warn};
use rayon::prelude::*;
use zerosum::analysis::{
    fourth_moment, laplace_segment_check, line_integral_laplace, mean_square_classical, mean_square_tilde,
    omega_mean_square,
};
use zerosum::explicit::{goldbach_average, goldbach_cesaro, goldston_yang, hl_cesaro, short_interval_report};
use zerosum::expsum::{linnik_approx, s_tilde};
use zerosum::special::{
    bessel_j, bessel_j_poisson, bessel_j_series, bessel_j_sonine, exp_power_sum, theta,
    theta_modular_residual, TAIL_EPSILON,
};
use zerosum::{
    build_sieve, load_zeros, BoundKind, Complex64, ComplexParam, ExpSumConfig, FormulaReport, MeanSquareReport,
    ProblemKind, QuadratureSpec, SieveTable, ZeroTable,
};

use crate::config::{grid, Options};
use crate::output::{num, Table};
use crate::CliError;

type Res<T> = Result<T, CliError>;

pub struct Context {
    pub opts: Options,
    pub quad: QuadratureSpec,
    pool: rayon::ThreadPool,
}

impl Context {
    pub fn new(opts: Options) -> Res<Self> {
        let quad = opts.quadrature()?;
        if opts.threads == Some(0) {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
        Ok(Context { opts, quad, pool })
    }

    /// Maps `f` over `items` on the pool; results keep the order of `items`.
    fn par_map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> Res<U> + Sync + Send) -> Res<Vec<U>> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    fn zeros(&self) -> Res<ZeroTable> {
        let path = self
            .opts
            .zeros
            .as_ref()
            .ok_or_else(|| CliError::Validation("--zeros is required".into()))?;
        Ok(load_zeros(path)?)
    }

    fn height(&self, table: &ZeroTable) -> Res<f64> {
        let t = self.opts.height.unwrap_or_else(|| table.max_height());
        if !(t > 0.0) {
            return Err(CliError::Validation(format!("--height must be positive, got {t}")));
        }
        if t > table.max_height() {
            warn!("height {t} exceeds the zero table ({}); using all zeros", table.max_height());
        }
        Ok(t)
    }

    /// Builds a sieve of at least `required`, honouring `--sieve-limit`.
    fn sieve(&self, required: u64) -> Res<SieveTable> {
        let limit = match self.opts.sieve_limit {
            Some(l) if l < required => {
                return Err(CliError::Validation(format!(
                    "--sieve-limit {l} is below the required {required}"
                )))
            }
            Some(l) => l,
            None => required,
        };
        debug!("sieving to {limit}");
        Ok(build_sieve(limit.max(2))?)
    }

    fn k(&self, default: f64) -> Res<f64> {
        let k = self.opts.k.unwrap_or(default);
        if !k.is_finite() {
            return Err(CliError::Validation("--k must be finite".into()));
        }
        Ok(k)
    }

    fn ell(&self, default: u32) -> Res<ExpSumConfig> {
        Ok(ExpSumConfig::new(self.opts.ell.unwrap_or(default))?)
    }

    fn n_grid(&self, default: &[u64]) -> Res<Vec<u64>> {
        let v = grid(&self.opts.n, default, "n")?;
        if v.contains(&0) {
            return Err(CliError::Validation("--n values must be positive".into()));
        }
        Ok(v)
    }
}

fn max(v: &[u64]) -> u64 {
    v.iter().copied().max().unwrap_or(0)
}

fn report_flags(reports: &[FormulaReport]) {
    for r in reports {
        for f in &r.flags {
            warn!("{} N = {}: {f}", r.problem.tag(), r.n);
        }
        for (k, v) in &r.diagnostics {
            debug!("{} N = {}: {k} = {v:e}", r.problem.tag(), r.n);
        }
    }
}

fn report_ms_flags(reports: &[MeanSquareReport]) {
    for r in reports {
        for f in &r.flags {
            warn!("N = {}, ell = {}, xi = {}: {f}", r.n, r.ell, r.xi);
        }
        for (k, v) in &r.extra {
            debug!("N = {}, ell = {}, xi = {}: {k} = {v:e}", r.n, r.ell, r.xi);
        }
    }
}

fn formulas(reports: Vec<FormulaReport>) -> Table {
    report_flags(&reports);
    Table::formulas(&reports)
}

fn mean_squares(reports: Vec<MeanSquareReport>) -> Table {
    report_ms_flags(&reports);
    Table::mean_squares(&reports)
}

pub fn build_sieve_cmd(cx: &Context) -> Res<Table> {
    let limit = cx.opts.sieve_limit.unwrap_or_else(|| cx.opts.n.as_deref().map(max).unwrap_or(1_000_000));
    let default: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x <= limit)
        .collect();
    let xs = cx.n_grid(&default)?;
    let sieve = cx.sieve(max(&xs).max(limit))?;
    let mut t = Table::new(&["x", "psi", "psi_minus_x", "bound"]);
    for x in xs {
        let (diff, bound) = sieve.chebyshev_check(x);
        t.push(vec![x.to_string(), num(sieve.psi(x)), num(diff), num(bound)]);
    }
    Ok(t)
}

pub fn verify_goldbach(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[4096])?;
    let table = cx.zeros()?;
    let view = table.truncate(cx.height(&table)?);
    let sieve = cx.sieve(max(&ns))?;
    Ok(formulas(cx.par_map(&ns, |&n| Ok(goldbach_average(n, view, &sieve)?))?))
}

pub fn verify_cesaro(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[1024])?;
    let k = cx.k(2.0)?;
    let table = cx.zeros()?;
    let t = cx.height(&table)?;
    let t2 = cx.opts.t2.unwrap_or(t);
    let view = table.truncate(t);
    let sieve = cx.sieve(max(&ns))?;
    // the double sum is parallel inside; the grid runs in order
    let reports = cx.pool.install(|| {
        ns.iter()
            .map(|&n| Ok(goldbach_cesaro(n, k, view, &sieve, t2)?))
            .collect::<Res<Vec<_>>>()
    })?;
    Ok(formulas(reports))
}

pub fn verify_gy(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[4096])?;
    let table = cx.zeros()?;
    let view = table.truncate(cx.height(&table)?);
    let sieve = cx.sieve(max(&ns))?;
    Ok(formulas(cx.par_map(&ns, |&n| Ok(goldston_yang(n, view, &sieve)?))?))
}

pub fn verify_hl(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[1000])?;
    let k = cx.k(2.0)?;
    let ell_max = cx.opts.bessel_ell_max.unwrap_or(100);
    let table = cx.zeros()?;
    let view = table.truncate(cx.height(&table)?);
    let sieve = cx.sieve(ProblemKind::HardyLittlewood.required_limit(max(&ns)))?;
    let reports = cx.pool.install(|| {
        ns.iter()
            .map(|&n| Ok(hl_cesaro(n, k, view, &sieve, ell_max, &cx.quad)?))
            .collect::<Res<Vec<_>>>()
    })?;
    Ok(formulas(reports))
}

pub fn verify_shortinterval(cx: &Context) -> Res<Table> {
    let kind: ProblemKind = cx.opts.kind.as_deref().unwrap_or("P1P2SQ").parse()?;
    let ns = cx.n_grid(&[100_000])?;
    let hs = grid(&cx.opts.h, &[1000], "h")?;
    let cells: Vec<(u64, u64)> = ns.iter().flat_map(|&n| hs.iter().map(move |&h| (n, h))).collect();
    let top = cells.iter().map(|&(n, h)| n.saturating_add(h)).max().unwrap_or(0);
    let sieve = cx.sieve(kind.required_limit(top))?;
    let reports = cx.par_map(&cells, |&(n, h)| Ok(short_interval_report(kind, n, h, &sieve)?))?;
    for r in &reports {
        if let Some(q) = r.diagnostics.get("lhs_over_main") {
            log::info!("{} N = {}, H = {}: lhs/main = {q:.6}", kind.tag(), r.n, r.h.unwrap_or(0));
        }
    }
    Ok(formulas(reports))
}

fn bound_kind(s: &str) -> Res<BoundKind> {
    match s.to_ascii_lowercase().as_str() {
        "rh" => Ok(BoundKind::Rh),
        "unconditional" => Ok(BoundKind::Unconditional),
        other => Err(CliError::Validation(format!("unknown bound {other:?}; use rh or unconditional"))),
    }
}

pub fn meansquare(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[1000])?;
    let xis = grid(&cx.opts.xi_grid, &[1e-3, 1e-2, 1e-1], "xi-grid")?;
    let cfg = cx.ell(1)?;
    let variant = cx.opts.variant.as_deref().unwrap_or("tilde").to_ascii_lowercase();
    let kind = bound_kind(cx.opts.bound.as_deref().unwrap_or("rh"))?;
    let c1 = cx.opts.c1.unwrap_or(1.0);
    let cells: Vec<(u64, f64)> = ns.iter().flat_map(|&n| xis.iter().map(move |&x| (n, x))).collect();
    let reports = match variant.as_str() {
        "tilde" => {
            let sieve = cx.sieve(cfg.n_max(max(&ns)))?;
            cx.par_map(&cells, |&(n, xi)| Ok(mean_square_tilde(&cfg, n, xi, kind, c1, &sieve, &cx.quad)?))?
        }
        "classical" => {
            let sieve = cx.sieve(max(&ns))?;
            cx.par_map(&cells, |&(n, xi)| Ok(mean_square_classical(&cfg, n, xi, &sieve)?))?
        }
        "omega" => {
            let sieve = cx.sieve(cfg.n_max(max(&ns)))?;
            cx.par_map(&cells, |&(n, xi)| Ok(omega_mean_square(&cfg, n, xi, &sieve)?))?
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown variant {other:?}; use tilde, classical or omega"
            )))
        }
    };
    Ok(mean_squares(reports))
}

pub fn fourthmoment(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[1000])?;
    let cfg = ExpSumConfig::new(2)?;
    let sieve = cx.sieve(cfg.n_max(max(&ns)))?;
    Ok(mean_squares(cx.par_map(&ns, |&n| Ok(fourth_moment(n, &sieve)?))?))
}

pub fn expsum_compare(cx: &Context) -> Res<Table> {
    let ns = cx.n_grid(&[10_000])?;
    let cfg = cx.ell(1)?;
    let table = cx.zeros()?;
    let t = cx.height(&table)?;
    let view = table.truncate(t);
    let sieve = cx.sieve(cfg.n_max(max(&ns)))?;
    let mut cells = Vec::new();
    for &n in &ns {
        let alphas = match &cx.opts.alpha_grid {
            Some(v) => grid(&Some(v.clone()), &[], "alpha-grid")?,
            None => vec![0.0, 1.0 / n as f64, 1e-2, 1e-1],
        };
        cells.extend(alphas.into_iter().map(|a| (n, a)));
    }
    let rows = cx.par_map(&cells, |&(n, alpha)| {
        let p = ComplexParam::segment(n, alpha)?;
        let exact = s_tilde(&cfg, &p, &sieve)?;
        let approx = linnik_approx(&cfg, &p, view)?;
        Ok(vec![
            n.to_string(),
            cfg.ell.to_string(),
            num(alpha),
            num(view.height()),
            num(exact.re),
            num(exact.im),
            num(approx.re),
            num(approx.im),
            num((exact - approx).norm() / exact.norm()),
        ])
    })?;
    let mut out = Table::new(&[
        "N", "ell", "alpha", "T", "s_tilde_re", "s_tilde_im", "linnik_re", "linnik_im", "rel_error",
    ]);
    rows.into_iter().for_each(|r| out.push(r));
    Ok(out)
}

/// `D^{s−1} e^{−aD}/Γ(s)` for `D > 0`, `1/2` at `s = 1, D = 0`, else 0.
pub fn laplace_closed_form(s: Complex64, a: f64, d: f64) -> Res<Complex64> {
    if d > 0.0 {
        let lg = zerosum::special::log_gamma(s)?;
        Ok(((s - 1.0) * d.ln() - a * d - lg).exp())
    } else if d == 0.0 && s == Complex64::new(1.0, 0.0) {
        Ok(Complex64::new(0.5, 0.0))
    } else {
        Ok(Complex64::new(0.0, 0.0))
    }
}

pub fn laplace_check(cx: &Context) -> Res<Table> {
    if let Some(ds) = &cx.opts.d_grid {
        let ds = grid(&Some(ds.clone()), &[], "d-grid")?;
        let s = Complex64::new(cx.opts.s_re.unwrap_or(2.0), cx.opts.s_im.unwrap_or(0.0));
        let a = cx.opts.a.unwrap_or(1.0);
        let rows = cx.par_map(&ds, |&d| {
            let v = line_integral_laplace(s, a, d, &cx.quad)?;
            let c = laplace_closed_form(s, a, d)?;
            Ok(vec![
                num(s.re),
                num(s.im),
                num(a),
                num(d),
                num(v.re),
                num(v.im),
                num(c.re),
                num(c.im),
                num((v - c).norm()),
            ])
        })?;
        let mut out = Table::new(&[
            "s_re", "s_im", "a", "D", "value_re", "value_im", "closed_re", "closed_im", "abs_diff",
        ]);
        rows.into_iter().for_each(|r| out.push(r));
        return Ok(out);
    }
    let mu = cx.opts.mu.unwrap_or(1.0);
    let ns = cx.n_grid(&[100, 1000, 10_000])?;
    let rows = cx.par_map(&ns, |&n| {
        let big_n = cx.opts.big_n.unwrap_or(n);
        let (v, closed) = laplace_segment_check(mu, n, big_n, &cx.quad)?;
        Ok(vec![
            num(mu),
            n.to_string(),
            big_n.to_string(),
            num(v.re),
            num(v.im),
            num(closed),
            num((v - closed).norm()),
        ])
    })?;
    let mut out = Table::new(&["mu", "n", "N", "numeric_re", "numeric_im", "closed_form", "abs_diff"]);
    rows.into_iter().for_each(|r| out.push(r));
    Ok(out)
}

/// Twenty fixed points with `Re z ∈ [0.05, 5]`, `|Im z| <= Re z / 2`.
pub fn theta_sample() -> Vec<Complex64> {
    (0..20)
        .map(|j| {
            let re = 0.05 * 100f64.powf((j as f64 + 0.5) / 20.0);
            let im = 0.5 * re * (2.399_963_229_728_653 * j as f64).sin();
            Complex64::new(re, im)
        })
        .collect()
}

pub fn theta_check(cx: &Context) -> Res<Table> {
    let zs = theta_sample();
    let rows = cx.par_map(&zs, |&z| {
        let modular = theta_modular_residual(z)?;
        let bridge = (2.0 * exp_power_sum(z, 2, TAIL_EPSILON)? + 1.0 - theta(z)?).norm();
        Ok(vec![num(z.re), num(z.im), num(modular), num(bridge)])
    })?;
    let mut out = Table::new(&["z_re", "z_im", "modular_residual", "bridge_residual"]);
    rows.into_iter().for_each(|r| out.push(r));
    Ok(out)
}

fn parse_nu(s: &str) -> Res<Complex64> {
    let bad = || CliError::Validation(format!("cannot parse order {s:?}; use re or re:im"));
    let (re, im) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 0.0),
    };
    Ok(Complex64::new(re, im))
}

pub fn bessel_check(cx: &Context) -> Res<Table> {
    let default_nu = ["0", "0.5", "2:3", "3:14.134725"].map(String::from);
    let nus = grid(&cx.opts.nu, &default_nu, "nu")?
        .iter()
        .map(|s| parse_nu(s))
        .collect::<Res<Vec<_>>>()?;
    let us = grid(&cx.opts.u_grid, &[0.5, 2.0, 5.0, 20.0], "u-grid")?;
    if let Some(u) = us.iter().find(|u| !(**u > 0.0)) {
        return Err(CliError::Validation(format!("u must be positive, got {u}")));
    }
    let cells: Vec<(Complex64, f64)> = nus.iter().flat_map(|&nu| us.iter().map(move |&u| (nu, u))).collect();
    let rows = cx.par_map(&cells, |&(nu, u)| {
        let series = bessel_j_series(nu, u)?;
        let sonine = bessel_j_sonine(nu, u, 1.0, &cx.quad)?;
        let best = bessel_j(nu, u, &cx.quad)?;
        let mut routes = vec![series, sonine];
        if nu.re > 0.0 {
            routes.push(bessel_j_poisson(nu, u, &cx.quad)?);
        }
        let scale = best.norm().max(1.0);
        let cross = routes.iter().map(|r| (r - best).norm() / scale).fold(0.0, f64::max);
        let closed = if nu == Complex64::new(0.5, 0.0) {
            num((best.re - (2.0 / (PI * u)).sqrt() * u.sin()).abs() + best.im.abs())
        } else {
            String::new()
        };
        Ok(vec![
            num(nu.re),
            num(nu.im),
            num(u),
            num(best.re),
            num(best.im),
            num(series.re),
            num(series.im),
            num(sonine.re),
            num(sonine.im),
            num(cross),
            closed,
        ])
    })?;
    let mut out = Table::new(&[
        "nu_re",
        "nu_im",
        "u",
        "value_re",
        "value_im",
        "series_re",
        "series_im",
        "sonine_re",
        "sonine_im",
        "cross_rel_diff",
        "closed_form_diff",
    ]);
    rows.into_iter().for_each(|r| out.push(r));
    Ok(out)
}
