//! Right-hand sides of the explicit formulas, term by term, against the
//! brute-force left-hand sides.
//!
//! Terms are stored as signed contributions, so `residual = lhs − Σ terms`.
//! Every power `N^w` is fused with the accompanying log-Gamma values into a
//! single exponential.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::accum::{CompensatedSum, ComplexSum};
use crate::analysis::{expected_calls, integrate_sampled, Sampler};
use crate::arith::{
    cesaro_sum, cumulative_sum, exp_weighted_short_sum, representation_count, short_interval_sum, ProblemKind,
    SieveTable,
};
use crate::expsum::{s_tilde_poly, u_sum, ExpSumConfig};
use crate::phase::e_mul;
use crate::quad::{integrate_oscillatory, periodic_trapezoid, QuadratureSpec};
use crate::special::{bessel_j, lattice_family, ln_gamma_real, log_gamma};
use crate::zeros::{two_sided_sum, ZeroView};
use crate::{Error, Result};

/// Named terms of the explicit formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Main,
    SecondaryMain,
    ZeroSum1,
    ZeroSum2,
    DoubleZeroSum,
    BesselSum,
    BesselZeroSum,
}

impl Term {
    pub const ALL: [Term; 7] = [
        Term::Main,
        Term::SecondaryMain,
        Term::ZeroSum1,
        Term::ZeroSum2,
        Term::DoubleZeroSum,
        Term::BesselSum,
        Term::BesselZeroSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Term::Main => "main",
            Term::SecondaryMain => "secondary_main",
            Term::ZeroSum1 => "zero_sum_1",
            Term::ZeroSum2 => "zero_sum_2",
            Term::DoubleZeroSum => "double_zero_sum",
            Term::BesselSum => "bessel_sum",
            Term::BesselZeroSum => "bessel_zero_sum",
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaReport {
    pub problem: ProblemKind,
    pub n: u64,
    pub k: Option<f64>,
    pub h: Option<u64>,
    /// Height of the zero sums.
    pub t: Option<f64>,
    pub lhs: f64,
    /// Signed contribution of each term to the right-hand side.
    pub terms: BTreeMap<Term, f64>,
    /// `lhs − Σ terms`.
    pub residual: f64,
    pub reference_bound: f64,
    /// `|residual| / reference_bound`.
    pub ratio: f64,
    pub diagnostics: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

impl FormulaReport {
    fn new(problem: ProblemKind, n: u64, lhs: f64) -> Self {
        FormulaReport {
            problem,
            n,
            k: None,
            h: None,
            t: None,
            lhs,
            terms: BTreeMap::new(),
            residual: lhs,
            reference_bound: 0.0,
            ratio: 0.0,
            diagnostics: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    pub fn term(&self, t: Term) -> Option<f64> {
        self.terms.get(&t).copied()
    }

    fn finish(mut self, bound: f64) -> Self {
        let sum: CompensatedSum = self.terms.values().copied().sum();
        self.residual = self.lhs - sum.value();
        self.reference_bound = bound;
        self.ratio = self.residual.abs() / bound;
        self
    }

    /// Stores a conjugate-symmetric zero sum as a real term, flagging it if
    /// the imaginary part is not negligible.
    fn put_real(&mut self, term: Term, value: Complex64) {
        self.diagnostics.insert(format!("{term}_imag"), value.im);
        let scale = value.norm().max(self.lhs.abs());
        if value.im.abs() > 1e-9 * scale {
            self.flags
                .push(format!("{term} has imaginary part {:e} (magnitude {:e})", value.im, value.norm()));
        }
        self.terms.insert(term, value.re);
    }

    fn set_k(&mut self, k: f64) -> Result<()> {
        if !(k > 0.5) || !k.is_finite() {
            return Err(Error::invalid(format!(
                "Cesàro order must exceed 1/2 for the zero sums to converge, got {k}"
            )));
        }
        if k <= 1.0 {
            self.flags.push(format!("k = {k} outside proven range k > 1"));
        }
        self.k = Some(k);
        Ok(())
    }
}

fn ln(n: u64) -> f64 {
    (n as f64).ln()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Σ_{n<=N} R_G(n) = N²/2 − 2 Σ_ρ N^{ρ+1}/(ρ(ρ+1)) + O(N log³N)`.
pub fn goldbach_average(n: u64, zeros: ZeroView<'_>, sieve: &SieveTable) -> Result<FormulaReport> {
    let lhs = cumulative_sum(ProblemKind::Goldbach, n, sieve)?;
    let l = ln(n);
    let mut r = FormulaReport::new(ProblemKind::Goldbach, n, lhs);
    r.t = Some(zeros.height());
    let nf = n as f64;
    r.terms.insert(Term::Main, 0.5 * nf * nf);
    let zs = two_sided_sum(zeros, |rho| Ok(((rho + 1.0) * l - rho.ln() - (rho + 1.0).ln()).exp()))?;
    r.put_real(Term::ZeroSum1, -2.0 * zs);
    Ok(r.finish(nf * l.powi(3)))
}

/// Cesàro-weighted Goldbach average of order `k`: main term `N²/Γ(k+3)`,
/// single zero sum, and the double sum over pairs of zeros with
/// `|γ₁|, |γ₂| <= t2`.
///
/// The double sum runs over `γ₁, γ₂ > 0` and adds the four sign combinations
/// as `2 Re[f(ρ₁, ρ₂) + f(ρ₁, ρ̄₂)]`. `double_tail_fraction` in the
/// diagnostics is the share of pairs with `max γ ∈ (t2/2, t2]`.
pub fn goldbach_cesaro(
    n: u64,
    k: f64,
    zeros: ZeroView<'_>,
    sieve: &SieveTable,
    t2: f64,
) -> Result<FormulaReport> {
    let mut r = FormulaReport::new(ProblemKind::Goldbach, n, 0.0);
    r.set_k(k)?;
    if !(t2 >= 0.0) {
        return Err(Error::invalid(format!("pair height must be nonnegative, got {t2}")));
    }
    r.lhs = cesaro_sum(ProblemKind::Goldbach, n, k, sieve)?;
    r.t = Some(zeros.height());
    let l = ln(n);
    let nf = n as f64;
    r.terms.insert(Term::Main, (2.0 * l - ln_gamma_real(k + 3.0)?).exp());

    let zs = two_sided_sum(zeros, |rho| {
        Ok((log_gamma(rho)? - log_gamma(rho + (k + 2.0))? + (rho + 1.0) * l).exp())
    })?;
    r.put_real(Term::ZeroSum1, -2.0 * zs);

    let pair_view = zeros.truncate(t2);
    let (double, tail) = double_zero_sum(pair_view, k, l, t2)?;
    r.terms.insert(Term::DoubleZeroSum, double);
    r.diagnostics.insert("pair_height".into(), t2);
    r.diagnostics.insert("pair_height_covered".into(), pair_view.height());
    r.diagnostics.insert("double_tail".into(), tail);
    r.diagnostics
        .insert("double_tail_fraction".into(), if double != 0.0 { (tail / double).abs() } else { 0.0 });
    Ok(r.finish(nf))
}

/// `(Σ, Σ over pairs with max γ > t2/2)` of
/// `Γ(ρ₁)Γ(ρ₂)/Γ(ρ₁+ρ₂+k+1) N^{ρ₁+ρ₂}` over all sign combinations.
fn double_zero_sum(view: ZeroView<'_>, k: f64, l: f64, t2: f64) -> Result<(f64, f64)> {
    let rhos: Vec<Complex64> = view.rhos().collect();
    let lg: Vec<Complex64> = rhos.iter().map(|&r| log_gamma(r)).collect::<Result<_>>()?;
    let rows: Vec<(f64, f64)> = (0..rhos.len())
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let mut row = CompensatedSum::new();
            let mut tail = CompensatedSum::new();
            for j in 0..rhos.len() {
                let (r1, r2) = (rhos[i], rhos[j]);
                let same = lg[i] + lg[j] - log_gamma(r1 + r2 + (k + 1.0))? + (r1 + r2) * l;
                let r2c = r2.conj();
                let cross = lg[i] + lg[j].conj() - log_gamma(r1 + r2c + (k + 1.0))? + (r1 + r2c) * l;
                let v = 2.0 * (same.exp() + cross.exp()).re;
                if !v.is_finite() {
                    return Err(Error::NonFinite { gamma: r1.im });
                }
                row.add(v);
                if r1.im.max(r2.im) > 0.5 * t2 {
                    tail.add(v);
                }
            }
            Ok((row.value(), tail.value()))
        })
        .collect::<Result<_>>()?;
    let total: CompensatedSum = rows.iter().map(|r| r.0).sum();
    let tail: CompensatedSum = rows.iter().map(|r| r.1).sum();
    Ok((total.value(), tail.value()))
}

/// `Σ_{n<=N} R_G(n)(1 − n/N) = N²/6 − 2 Σ_ρ N^{ρ+1}/(ρ(ρ+1)(ρ+2)) + O(N)`.
///
/// The left side is weighted per `n`; the Cesàro evaluation at `k = 1` is
/// kept as `lhs_cesaro` for comparison.
pub fn goldston_yang(n: u64, zeros: ZeroView<'_>, sieve: &SieveTable) -> Result<FormulaReport> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    for m in 1..n {
        let w = 1.0 - m as f64 / nf;
        acc.add(w * representation_count(ProblemKind::Goldbach, m, sieve)?);
    }
    let mut r = FormulaReport::new(ProblemKind::Goldbach, n, acc.value());
    r.k = Some(1.0);
    r.t = Some(zeros.height());
    r.diagnostics
        .insert("lhs_cesaro".into(), cesaro_sum(ProblemKind::Goldbach, n, 1.0, sieve)?);
    let l = ln(n);
    r.terms.insert(Term::Main, nf * nf / 6.0);
    let zs = two_sided_sum(zeros, |rho| {
        Ok(((rho + 1.0) * l - rho.ln() - (rho + 1.0).ln() - (rho + 2.0).ln()).exp())
    })?;
    r.put_real(Term::ZeroSum1, -2.0 * zs);
    Ok(r.finish(nf))
}

/// Cesàro-weighted Hardy–Littlewood average of order `k`: two main terms,
/// two zero sums, and the two Bessel sums coming from the modularity of `θ`.
///
/// The Bessel sums are truncated at `ℓ <= ell_max`. For the zero-free one a
/// tail bound from `|J| <= 1` is stored as `bessel_sum_tail`. The
/// zero-indexed one is summed `ρ`-outer, `ℓ`-inner, all `ℓ` for one `ρ`
/// coming from a single Poisson-integral layout.
pub fn hl_cesaro(
    n: u64,
    k: f64,
    zeros: ZeroView<'_>,
    sieve: &SieveTable,
    ell_max: usize,
    quad: &QuadratureSpec,
) -> Result<FormulaReport> {
    let mut r = FormulaReport::new(ProblemKind::HardyLittlewood, n, 0.0);
    r.set_k(k)?;
    if ell_max == 0 {
        return Err(Error::invalid("ell_max must be >= 1"));
    }
    r.lhs = cesaro_sum(ProblemKind::HardyLittlewood, n, k, sieve)?;
    r.t = Some(zeros.height());
    let l = ln(n);
    let nf = n as f64;
    let ln_sqrt_pi = 0.5 * PI.ln();

    let main = (ln_sqrt_pi - 2f64.ln() + 1.5 * l - ln_gamma_real(k + 2.5)?).exp();
    r.terms.insert(Term::Main, main);
    r.terms
        .insert(Term::SecondaryMain, -(l - 2f64.ln() - ln_gamma_real(k + 2.0)?).exp());

    let z1 = two_sided_sum(zeros, |rho| {
        Ok((log_gamma(rho)? - log_gamma(rho + (k + 1.5))? + (rho + 0.5) * l).exp())
    })?;
    r.put_real(Term::ZeroSum1, -(PI.sqrt() / 2.0) * z1);
    let z2 = two_sided_sum(zeros, |rho| {
        Ok((log_gamma(rho)? - log_gamma(rho + (k + 1.0))? + rho * l).exp())
    })?;
    r.put_real(Term::ZeroSum2, 0.5 * z2);

    // N^{3/4−k/2}/π^{k+1} Σ_ℓ J_{k+3/2}(2πℓ√N)/ℓ^{k+3/2}
    let u = 2.0 * PI * nf.sqrt();
    let nu = k + 1.5;
    let mut bs = CompensatedSum::new();
    for ell in 1..=ell_max {
        let lf = ell as f64;
        let j = bessel_j(real(nu), lf * u, quad).map_err(|e| cell_error(e, ell, None))?;
        bs.add(j.re / lf.powf(nu));
    }
    let pref = ((0.75 - 0.5 * k) * l - (k + 1.0) * PI.ln()).exp();
    r.terms.insert(Term::BesselSum, pref * bs.value());
    let lf = ell_max as f64;
    r.diagnostics
        .insert("bessel_sum_tail".into(), pref * lf.powf(-(k + 0.5)) / (k + 0.5));
    r.diagnostics.insert("bessel_ell_max".into(), lf);

    // −N^{1/4−k/2}/π^k Σ_ρ Γ(ρ)(√N/π)^ρ Σ_ℓ J_{k+1/2+ρ}(2πℓ√N)/ℓ^{k+1/2+ρ}
    let cell = |rho: Complex64| -> Result<Complex64> {
        let fam = lattice_family(rho + (k + 0.5), u, ell_max, quad).map_err(|e| cell_error(e, 0, Some(rho.im)))?;
        let mut acc = ComplexSum::new();
        for (i, (&v, &err)) in fam.integrals.iter().zip(&fam.errors).enumerate() {
            let tol = quad.tolerance(v.norm()).max(1e-12);
            if err > tol {
                return Err(Error::accuracy(
                    format!("Bessel cell ℓ = {}, γ = {}", i + 1, rho.im),
                    err,
                    tol,
                ));
            }
            acc.add(v);
        }
        let log_scale = log_gamma(rho)? + rho * (0.5 * l - PI.ln()) + fam.log_prefactor;
        Ok(log_scale.exp() * acc.value())
    };
    let rhos: Vec<Complex64> = zeros.rhos().collect();
    let cells: Vec<Complex64> = rhos.par_iter().map(|&rho| cell(rho)).collect::<Result<_>>()?;
    let mut bz = ComplexSum::new();
    for c in &cells {
        bz.add(Complex64::new(2.0 * c.re, 0.0));
    }
    if let (Some(&rho), Some(&first)) = (rhos.first(), cells.first()) {
        let mirror = cell(rho.conj())?;
        r.diagnostics
            .insert("bessel_zero_sum_conj_defect".into(), (mirror - first.conj()).norm() / first.norm());
    }
    let pref = ((0.25 - 0.5 * k) * l - k * PI.ln()).exp();
    r.put_real(Term::BesselZeroSum, -pref * bz.value());
    Ok(r.finish(nf.sqrt()))
}

fn cell_error(e: Error, ell: usize, gamma: Option<f64>) -> Error {
    match e {
        Error::Accuracy {
            context,
            achieved,
            wanted,
        } => {
            let at = match gamma {
                Some(g) => format!("γ = {g}"),
                None => format!("ℓ = {ell}, no zero"),
            };
            Error::Accuracy {
                context: format!("Bessel cell {at}: {context}"),
                achieved,
                wanted,
            }
        }
        other => other,
    }
}

/// Short-interval sum over `(N, N+H]` against its main term and error
/// expression. `lhs_over_main` is stored in the diagnostics.
pub fn short_interval_report(kind: ProblemKind, n: u64, h: u64, sieve: &SieveTable) -> Result<FormulaReport> {
    if n < 3 {
        return Err(Error::invalid("N must be at least 3"));
    }
    let nf = n as f64;
    let hf = h as f64;
    let l = ln(n);
    let (main, bound) = match kind {
        ProblemKind::Hua => (
            0.25 * PI * hf * nf,
            hf.sqrt() * nf * l * l + hf * nf.powf(0.75) * l.powi(3) + hf * hf * l.powf(1.5),
        ),
        ProblemKind::PrimePrimeSquare => (
            hf * nf.sqrt(),
            hf * hf / nf.sqrt() + nf.powf(0.75) * l.powi(3) + hf * nf.cbrt() * l * l,
        ),
        ProblemKind::TwoPrimeSquares => (0.25 * PI * hf, hf * hf / nf + hf.sqrt() * nf.powf(0.25) * l.powf(1.5)),
        ProblemKind::PrimeSquareSquare => (0.25 * PI * hf, hf * hf / nf + hf * l.ln() / l.sqrt()),
        other => {
            return Err(Error::invalid(format!("{other} has no short-interval formula")));
        }
    };
    let lhs = short_interval_sum(kind, n, h, sieve)?;
    let mut r = FormulaReport::new(kind, n, lhs);
    r.h = Some(h);
    r.terms.insert(Term::Main, main);
    r.diagnostics.insert("lhs_over_main".into(), lhs / main);
    Ok(r.finish(bound))
}

/// The circle-method split of `Σ_{n=N+1}^{N+H} e^{−n/N} R_G(n)` with
/// `M₁ = 1/z`.
///
/// On `[−1/2, 1/2]` the sum equals `∫ S̃₁(α)² K(α) dα` with
/// `K(α) = U(−α, H) e(−Nα)`, which selects the frequencies `N+1..=N+H`.
/// Returned entries:
/// * `target`: the brute-force sum;
/// * `main_integral`, `rest_integral`: `∫ M₁² K` and `∫ (S̃₁² − M₁²) K`;
/// * `decomposition_sum`, `decomposition_rel_error`;
/// * `full_trapezoid`: `∫ S̃₁² K` by the trapezoid rule, exact for this
///   band-limited integrand;
/// * `main_heuristic`: `e^{−1} H N`;
/// * `split_inner`, `split_outer`: `H ∫_{−1/H}^{1/H} |S̃₁ − M₁|²` and
///   `∫_{1/H}^{1/2} |S̃₁ − M₁|² dα/α`.
pub fn circle_decomposition_diag(
    n: u64,
    h: u64,
    sieve: &SieveTable,
    quad: &QuadratureSpec,
) -> Result<BTreeMap<String, f64>> {
    if h == 0 || h >= n {
        return Err(Error::invalid(format!("need 0 < H < N, got N = {n}, H = {h}")));
    }
    let nf = n as f64;
    let hf = h as f64;
    let target = exp_weighted_short_sum(n, h, sieve)?;
    let cfg = ExpSumConfig::new(1)?;
    let poly = s_tilde_poly(&cfg, n, sieve)?;
    let f = poly.max_freq() as f64;

    let m1 = |alpha: f64| Complex64::new(1.0 / nf, -2.0 * PI * alpha).inv();
    let kernel = |alpha: f64| u_sum(-alpha, h) * e_mul(-nf, alpha);

    let main_freq = |alpha: f64| nf + hf + 1.0 / (alpha.abs() + 1.0 / nf);
    let main = integrate_oscillatory(-0.5, 0.5, |a| m1(a) * m1(a) * kernel(a), main_freq, quad)?.value;

    let rest_freq = 2.0 * f + nf + hf;
    let sampler = Sampler::new(poly.clone(), expected_calls(-0.5, 0.5, rest_freq, quad));
    let rest = integrate_sampled(
        &sampler,
        -0.5,
        0.5,
        rest_freq,
        |a, s| (s * s - m1(a) * m1(a)) * kernel(a),
        quad,
    )?;

    let m = ((2.0 * f + nf + hf) as usize + 1).next_power_of_two();
    let samples = poly.samples(m);
    let vals: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(j, &s)| s * s * kernel(j as f64 / m as f64))
        .collect();
    let full = periodic_trapezoid(&vals);

    let diff_freq = f + nf;
    let diff = |a: f64, s: Complex64| Complex64::new((s - m1(a)).norm_sqr(), 0.0);
    let inner = integrate_sampled(&sampler, -1.0 / hf, 1.0 / hf, diff_freq, diff, quad)?.re;
    let outer = integrate_sampled(
        &sampler,
        1.0 / hf,
        0.5,
        diff_freq,
        |a, s| diff(a, s) / a,
        quad,
    )?
    .re;

    let sum = main + rest;
    let mut out = BTreeMap::new();
    out.insert("target".to_string(), target);
    out.insert("main_integral".to_string(), main.re);
    out.insert("main_integral_imag".to_string(), main.im);
    out.insert("rest_integral".to_string(), rest.re);
    out.insert("rest_integral_imag".to_string(), rest.im);
    out.insert("decomposition_sum".to_string(), sum.re);
    out.insert("decomposition_rel_error".to_string(), (sum - target).norm() / target.abs());
    out.insert("full_trapezoid".to_string(), full.re);
    out.insert("main_heuristic".to_string(), (-1f64).exp() * hf * nf);
    out.insert("split_inner".to_string(), hf * inner);
    out.insert("split_outer".to_string(), outer);
    Ok(out)
}
