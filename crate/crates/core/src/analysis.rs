//! Integral identities and truncated mean squares of the exponential sums.
//!
//! Three evaluation strategies are used, chosen by the shape of the integrand:
//!
//! * `|P(α)|²` for a trigonometric polynomial `P` over `[−ξ, ξ]` is summed in
//!   closed form with the kernel `∫_{−ξ}^{ξ} e(dα) dα = sin(2πξd)/(πd)`.
//! * Band-limited integrands over a full period use the trapezoid rule on an
//!   FFT grid, exact once the grid exceeds the bandwidth.
//! * Everything else (differences against the analytic main term `M`, kernels
//!   such as `U(−α, H)`) goes through composite Gauss–Legendre, with the sum
//!   `S̃` read from a [`Sampler`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::accum::{CompensatedSum, ComplexSum};
use crate::arith::SieveTable;
use crate::expsum::{omega_poly, s_classical_poly, s_tilde_poly, ExpSumConfig, TrigPoly};
use crate::phase::{e_mul, frac_product};
use crate::quad::{integrate_oscillatory, integrate_panels, oscillatory_panels, periodic_trapezoid, QuadratureSpec};
use crate::special::ln_gamma_real;
use crate::{Error, Result};

/// Which form of a bound a report is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Rh,
    Unconditional,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Rh => "RH",
            BoundKind::Unconditional => "UNCONDITIONAL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanSquareReport {
    pub n: u64,
    pub ell: u32,
    pub xi: f64,
    pub integral_value: f64,
    pub reference_bound: f64,
    /// `integral_value / reference_bound`.
    pub ratio: f64,
    pub bound_kind: BoundKind,
    /// Companion integrals and alternative bounds.
    pub extra: BTreeMap<String, f64>,
    /// Range and validity warnings.
    pub flags: Vec<String>,
}

impl MeanSquareReport {
    fn new(n: u64, ell: u32, xi: f64, value: f64, bound: f64, bound_kind: BoundKind) -> Self {
        let mut flags = Vec::new();
        let ratio = if bound > 0.0 && bound.is_finite() {
            value / bound
        } else {
            flags.push(format!("degenerate reference bound {bound}"));
            0.0
        };
        MeanSquareReport {
            n,
            ell,
            xi,
            integral_value: value,
            reference_bound: bound,
            ratio,
            bound_kind,
            extra: BTreeMap::new(),
            flags,
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

const LAPLACE_TAIL_TERMS: usize = 40;
const PRINCIPAL_CUTOFF: f64 = 1e-12;

/// `(1/2π) ∫_{−∞}^{∞} e^{iDu} (a+iu)^{−s} du`, principal value when `D = 0`.
///
/// For `D ≠ 0` the line is cut at `±U` with `|D|·|a+iU|` well above `|s|`;
/// `[−U, U]` is integrated by quadrature and each tail by its
/// integration-by-parts series. For `D = 0` the substitution `u = a tan φ`
/// gives `(a^{1−s}/π) ∫_0^{π/2} cos^{s−2}φ cos(sφ) dφ`, integrated on a
/// geometric grid toward `π/2` with the endpoint singularity handled
/// analytically.
pub fn line_integral_laplace(s: Complex64, a: f64, d: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    quad.validate()?;
    if !(a > 0.0 && a.is_finite()) || !d.is_finite() || !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::invalid(format!("bad Laplace parameters s = {s}, a = {a}, D = {d}")));
    }
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!("line integral needs Re s > 0, got s = {s}")));
    }
    if d == 0.0 {
        return laplace_principal(s, a, quad);
    }

    let scale = s.norm() + LAPLACE_TAIL_TERMS as f64;
    let u_cut = (4.0 * scale / d.abs()).max(a);
    let g = |u: f64| (-s * Complex64::new(a, u).ln()).exp();
    let spread = s.norm() / (2.0 * PI);
    let breaks = oscillatory_panels(
        -u_cut,
        u_cut,
        |u| d.abs() / (2.0 * PI) + spread / Complex64::new(a, u).norm(),
        a,
        quad,
    )?;
    let body = integrate_panels(&breaks, |u| Complex64::from_polar(1.0, d * u) * g(u), quad)?;

    // c_k = P_k i^k / (iD)^{k+1} with P_k = (−s)(−s−1)…(−s−k+1)
    let mut acc = ComplexSum::new();
    acc.add(body.value);
    let upper = Complex64::new(a, u_cut);
    let lower = Complex64::new(a, -u_cut);
    let up_phase = Complex64::from_polar(1.0, d * u_cut);
    let lo_phase = up_phase.conj();
    let mut c = Complex64::new(0.0, -1.0 / d);
    let mut prev = f64::INFINITY;
    for k in 0..LAPLACE_TAIL_TERMS {
        let sk = s + k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let up = -sign * c * (-sk * upper.ln()).exp() * up_phase;
        let lo = sign * c * (-sk * lower.ln()).exp() * lo_phase;
        let size = up.norm() + lo.norm();
        if size > prev {
            break;
        }
        acc.add(up + lo);
        if size < 1e-18 * acc.value().norm().max(1e-300) {
            break;
        }
        prev = size;
        c = c * (-sk) / d;
    }
    Ok(acc.value() / (2.0 * PI))
}

fn laplace_principal(s: Complex64, a: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    let one = s == Complex64::new(1.0, 0.0);
    if !one && s.re <= 1.0 {
        return Err(Error::Domain(format!(
            "principal value at D = 0 decays too slowly for s = {s} (need Re s > 1 or s = 1)"
        )));
    }
    // ψ = π/2 − φ: integrand sin^{s−2}ψ · cos(s(π/2 − ψ))
    let half = 0.5 * PI;
    let f = |psi: f64| ((s - 2.0) * psi.sin().ln()).exp() * (s * (half - psi)).cos();
    let mut breaks = vec![PRINCIPAL_CUTOFF];
    while *breaks.last().unwrap() * 2.0 < half {
        let next = breaks.last().unwrap() * 2.0;
        breaks.push(next);
    }
    breaks.push(half);
    let body = integrate_panels(&breaks, f, quad)?;
    // ∫_0^{ψ₀} ψ^{s−2}[cos(sπ/2) + s sin(sπ/2) ψ] dψ
    let head = if one {
        Complex64::new(PRINCIPAL_CUTOFF, 0.0)
    } else {
        let p = PRINCIPAL_CUTOFF.ln();
        (s * half).cos() * ((s - 1.0) * p).exp() / (s - 1.0) + (s * half).sin() * (s * p).exp()
    };
    let scale = ((1.0 - s) * a.ln()).exp() / PI;
    Ok(scale * (body.value + head))
}

/// `∫_{−1/2}^{1/2} z^{−μ} e(−nα) dα` with `z = 1/N − 2πiα`, paired with the
/// closed form `e^{−n/N} n^{μ−1}/Γ(μ)`.
pub fn laplace_segment_check(mu: f64, n: u64, big_n: u64, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    if !(mu > 0.0 && mu.is_finite()) || n == 0 || big_n == 0 {
        return Err(Error::invalid(format!(
            "need μ > 0, n >= 1, N >= 1 (got μ = {mu}, n = {n}, N = {big_n})"
        )));
    }
    let nf = n as f64;
    let bn = big_n as f64;
    let inv_n = 1.0 / bn;
    let integrand = |alpha: f64| {
        let z = Complex64::new(inv_n, -2.0 * PI * alpha);
        (-mu * z.ln()).exp() * e_mul(-nf, alpha)
    };
    let freq = |alpha: f64| {
        let x = 2.0 * PI * bn * alpha;
        nf + mu * bn / (1.0 + x * x) + 0.25 * (1.0 + mu) / (alpha.abs() + inv_n)
    };
    let numeric = integrate_oscillatory(-0.5, 0.5, integrand, freq, quad)?;
    let closed = (-nf / bn + (mu - 1.0) * nf.ln() - ln_gamma_real(mu)?).exp();
    Ok((numeric.value, closed))
}

/// Sum of `|Σ c_j e(f_j α)|²` over `[−ξ, ξ]` in closed form.
pub fn trig_mean_square(poly: &TrigPoly, xi: f64) -> f64 {
    if xi <= 0.0 {
        return 0.0;
    }
    let f = poly.freqs();
    let c = poly.coeffs();
    let mut diag = CompensatedSum::new();
    let mut off = CompensatedSum::new();
    for i in 0..f.len() {
        diag.add(c[i] * c[i]);
        for j in (i + 1)..f.len() {
            if f[i] == f[j] {
                off.add(2.0 * xi * c[i] * c[j]);
                continue;
            }
            let dlt = f[j] as f64 - f[i] as f64;
            let sine = (2.0 * PI * frac_product(dlt, xi)).sin();
            off.add(c[i] * c[j] * sine / (PI * dlt));
        }
    }
    (2.0 * xi * diag.value() + 2.0 * off.value()).max(0.0)
}

const OVERSAMPLE: f64 = 32.0;
const INTERP_POINTS: usize = 20;

/// Repeated evaluation of a trigonometric polynomial: either term by term or
/// by local barycentric interpolation in an oversampled FFT table, whichever
/// is cheaper for the expected number of calls.
#[derive(Debug, Clone)]
pub struct Sampler {
    inner: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Direct(TrigPoly),
    Table {
        values: Vec<Complex64>,
        weights: [f64; INTERP_POINTS],
    },
}

impl Sampler {
    pub fn new(poly: TrigPoly, expected_calls: f64) -> Sampler {
        let m = table_size(poly.max_freq());
        let direct = expected_calls * poly.len() as f64;
        let table = 5.0 * m as f64 * (m as f64).log2() + 4.0 * INTERP_POINTS as f64 * expected_calls;
        if direct <= table {
            return Sampler {
                inner: SamplerKind::Direct(poly),
            };
        }
        Sampler::table(&poly)
    }

    /// Always interpolate.
    pub fn table(poly: &TrigPoly) -> Sampler {
        let m = table_size(poly.max_freq());
        let mut weights = [0.0; INTERP_POINTS];
        let mut binom = 1.0;
        for (j, w) in weights.iter_mut().enumerate() {
            *w = if j % 2 == 0 { binom } else { -binom };
            binom = binom * (INTERP_POINTS - 1 - j) as f64 / (j + 1) as f64;
        }
        Sampler {
            inner: SamplerKind::Table {
                values: poly.samples(m),
                weights,
            },
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.inner, SamplerKind::Table { .. })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match &self.inner {
            SamplerKind::Direct(p) => p.eval(t),
            SamplerKind::Table { values, weights } => {
                let m = values.len();
                let u = (t - t.floor()) * m as f64;
                let base = u.floor() as i64 - (INTERP_POINTS as i64 / 2 - 1);
                let r = u - base as f64;
                let mut num = Complex64::new(0.0, 0.0);
                let mut den = 0.0;
                for (j, &w) in weights.iter().enumerate() {
                    let idx = (base + j as i64).rem_euclid(m as i64) as usize;
                    let dx = r - j as f64;
                    if dx == 0.0 {
                        return values[idx];
                    }
                    let q = w / dx;
                    num += q * values[idx];
                    den += q;
                }
                num / den
            }
        }
    }
}

fn table_size(max_freq: u64) -> usize {
    ((OVERSAMPLE * (max_freq as f64 + 1.0)) as usize).next_power_of_two().max(64)
}

/// Rough number of integrand calls for an oscillatory layout of `[a, b]`.
pub(crate) fn expected_calls(a: f64, b: f64, freq: f64, quad: &QuadratureSpec) -> f64 {
    let panels = ((b - a) * 4.0 * freq).max(1.0);
    panels * 3.0 * quad.points_per_panel as f64
}

/// `∫_a^b g(α, P(α)) dα` by Gauss–Legendre, with `P` read from `sampler` and
/// panels sized for frequency `freq`.
pub(crate) fn integrate_sampled(
    sampler: &Sampler,
    a: f64,
    b: f64,
    freq: f64,
    g: impl Fn(f64, Complex64) -> Complex64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    if !(b > a) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let est = integrate_oscillatory(a, b, |x| g(x, sampler.eval(x)), |_| freq.max(1.0), quad)?;
    Ok(est.value)
}

/// `∫_{−ξ}^{ξ} |P|²` by quadrature, as an end-to-end check of the engine
/// against [`trig_mean_square`].
pub fn quadrature_mean_square(poly: &TrigPoly, xi: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_xi(xi)?;
    let freq = poly.max_freq() as f64;
    let sampler = Sampler::new(poly.clone(), expected_calls(-xi, xi, freq, quad));
    let v = integrate_sampled(&sampler, -xi, xi, freq, |_, p| Complex64::new(p.norm_sqr(), 0.0), quad)?;
    Ok(v.re)
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&xi) {
        return Err(Error::invalid(format!("ξ must lie in [0, 1/2], got {xi}")));
    }
    Ok(())
}

fn log_n(n: u64) -> f64 {
    (n as f64).ln()
}

/// Truncated mean square of `S̃_ℓ(α) − Γ(1/ℓ)/(ℓ z^{1/ℓ})` over `[−ξ, ξ]`.
///
/// The RH bound is `N^{1/ℓ} ξ L²`; the unconditional one,
/// `N^{2/ℓ−1} exp(−c₁ (L/log L)^{1/3})`, depends on the unknown constant
/// `c₁` and is reported for comparison only. Both are stored in `extra`.
pub fn mean_square_tilde(
    cfg: &ExpSumConfig,
    n: u64,
    xi: f64,
    bound_kind: BoundKind,
    c1: f64,
    sieve: &SieveTable,
    quad: &QuadratureSpec,
) -> Result<MeanSquareReport> {
    cfg.validate()?;
    check_xi(xi)?;
    if n < 3 {
        return Err(Error::invalid("mean squares need N >= 3"));
    }
    let ell = cfg.ell as f64;
    let l = log_n(n);
    let nf = n as f64;
    let rh = nf.powf(1.0 / ell) * xi * l * l;
    let uncond = nf.powf(2.0 / ell - 1.0) * (-c1 * (l / l.ln()).cbrt()).exp();

    let value = if xi == 0.0 {
        0.0
    } else {
        let poly = s_tilde_poly(cfg, n, sieve)?;
        let freq = poly.max_freq() as f64;
        let sampler = Sampler::new(poly, expected_calls(-xi, xi, freq, quad));
        let inv = 1.0 / ell;
        let lead = (ln_gamma_real(inv)? - ell.ln()).exp();
        let main = move |alpha: f64| lead * (-inv * Complex64::new(1.0 / nf, -2.0 * PI * alpha).ln()).exp();
        let v = integrate_sampled(
            &sampler,
            -xi,
            xi,
            freq,
            |alpha, s| Complex64::new((s - main(alpha)).norm_sqr(), 0.0),
            quad,
        )?;
        v.re.max(0.0)
    };
    let bound = match bound_kind {
        BoundKind::Rh => rh,
        BoundKind::Unconditional => uncond,
    };
    let mut report = MeanSquareReport::new(n, cfg.ell, xi, value, bound, bound_kind)
        .with("rh_bound", rh)
        .with("unconditional_bound", uncond)
        .with("c1", c1);
    let limit = nf.powf(-1.0 + 5.0 / (6.0 * ell));
    report.extra.insert("unconditional_xi_limit".into(), limit);
    if bound_kind == BoundKind::Unconditional && xi >= limit {
        report
            .flags
            .push(format!("ξ = {xi} outside the unconditional range ξ < {limit:.3e}"));
    }
    Ok(report)
}

/// Truncated mean square of `S_ℓ − T_ℓ` over `[−ξ, ξ]`, against the bound
/// `N^{1/ℓ}ξL² + N^{2/ℓ−2}L²/ξ`. For `ℓ = 1` the alternative
/// `NξL² + min(L²/(ξ log²(3ξ)), NξL⁴)` is stored as `refined_bound`.
pub fn mean_square_classical(
    cfg: &ExpSumConfig,
    n: u64,
    xi: f64,
    sieve: &SieveTable,
) -> Result<MeanSquareReport> {
    cfg.validate()?;
    check_xi(xi)?;
    if n < 3 {
        return Err(Error::invalid("mean squares need N >= 3"));
    }
    let ell = cfg.ell as f64;
    let l = log_n(n);
    let nf = n as f64;

    let s = s_classical_poly(cfg, n, sieve)?;
    // S_ℓ − T_ℓ has coefficient Λ(m) − 1 at frequency m^ℓ
    let mut coeffs = vec![-1.0; n as usize];
    for (&f, &c) in s.freqs().iter().zip(s.coeffs()) {
        let m = (f as f64).powf(1.0 / ell).round() as usize;
        coeffs[m - 1] += c;
    }
    let freqs = (1..=n).map(|m| m.pow(cfg.ell)).collect();
    let value = trig_mean_square(&TrigPoly::new(freqs, coeffs), xi);

    let bound = nf.powf(1.0 / ell) * xi * l * l + nf.powf(2.0 / ell - 2.0) * l * l / xi;
    let mut report = MeanSquareReport::new(n, cfg.ell, xi, value, bound, BoundKind::Rh);
    if cfg.ell == 1 {
        let log3 = (3.0 * xi).ln();
        let first = if log3 == 0.0 { f64::INFINITY } else { l * l / (xi * log3 * log3) };
        let refined = nf * xi * l * l + first.min(nf * xi * l.powi(4));
        report.extra.insert("refined_bound".into(), refined);
        if refined > 0.0 && refined.is_finite() {
            report.extra.insert("refined_ratio".into(), value / refined);
        }
    }
    let lo = 0.5 / nf;
    let hi = 0.5 * nf.powf(1.0 / ell - 1.0);
    if xi < lo || xi > hi {
        report
            .flags
            .push(format!("ξ = {xi} outside the bound's range [{lo:.3e}, {hi:.3e}]"));
    }
    Ok(report)
}

/// Truncated mean square of `ω_ℓ` over `[−ξ, ξ]` against
/// `ξN^{1/ℓ} + (L if ℓ = 2, else 1)`, with `∫|S̃_ℓ|²` and its bound
/// `ξN^{1/ℓ}L + (L² if ℓ = 2, else 1)` as companions.
pub fn omega_mean_square(cfg: &ExpSumConfig, n: u64, xi: f64, sieve: &SieveTable) -> Result<MeanSquareReport> {
    cfg.validate()?;
    check_xi(xi)?;
    if cfg.ell < 2 {
        return Err(Error::invalid("the ω mean square needs ell >= 2"));
    }
    if n < 3 {
        return Err(Error::invalid("mean squares need N >= 3"));
    }
    let l = log_n(n);
    let root = (n as f64).powf(1.0 / cfg.ell as f64);
    let (om_extra, st_extra) = if cfg.ell == 2 { (l, l * l) } else { (1.0, 1.0) };
    let omega = trig_mean_square(&omega_poly(cfg, n), xi);
    let tilde = trig_mean_square(&s_tilde_poly(cfg, n, sieve)?, xi);
    let tilde_bound = xi * root * l + st_extra;
    Ok(
        MeanSquareReport::new(n, cfg.ell, xi, omega, xi * root + om_extra, BoundKind::Rh)
            .with("s_tilde_integral", tilde)
            .with("s_tilde_bound", tilde_bound)
            .with("s_tilde_ratio", tilde / tilde_bound),
    )
}

/// `∫_{−1/2}^{1/2} |S̃₂|⁴` by the trapezoid rule on `M > 2·max n²` points,
/// against `N L²`. The Parseval form is stored as `parseval`.
pub fn fourth_moment(n: u64, sieve: &SieveTable) -> Result<MeanSquareReport> {
    if n < 100 {
        return Err(Error::invalid(format!("fourth moment needs N >= 100, got {n}")));
    }
    let cfg = ExpSumConfig::new(2)?;
    let poly = s_tilde_poly(&cfg, n, sieve)?;
    let m = (2 * poly.max_freq() as usize + 1).next_power_of_two();
    let samples: Vec<Complex64> = poly
        .samples(m)
        .into_iter()
        .map(|s| Complex64::new(s.norm_sqr() * s.norm_sqr(), 0.0))
        .collect();
    let value = periodic_trapezoid(&samples).re;
    let l = log_n(n);
    let parseval = fourth_moment_parseval(n, sieve)?;
    Ok(
        MeanSquareReport::new(n, 2, 0.5, value, n as f64 * l * l, BoundKind::Rh)
            .with("parseval", parseval)
            .with("trapezoid_points", m as f64),
    )
}

/// `Σ_k a_k²` with `a_k = e^{−k/N} Σ_{n₁²+n₂²=k} Λ(n₁)Λ(n₂)` over ordered
/// pairs, the coefficient form of `∫|S̃₂|⁴`.
pub fn fourth_moment_parseval(n: u64, sieve: &SieveTable) -> Result<f64> {
    let cfg = ExpSumConfig::new(2)?;
    let poly = s_tilde_poly(&cfg, n, sieve)?;
    let f = poly.freqs();
    let c = poly.coeffs();
    let mut a = vec![0.0; 2 * poly.max_freq() as usize + 1];
    for i in 0..f.len() {
        for j in 0..f.len() {
            a[(f[i] + f[j]) as usize] += c[i] * c[j];
        }
    }
    Ok(a.iter().map(|&x| x * x).sum::<CompensatedSum>().value())
}
