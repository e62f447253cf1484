//! Exponential sums over primes and integers, and Linnik's explicit-formula
//! approximation to the weighted sum.
//!
//! Notation: `e(x) = exp(2πix)`. On the segment `z = 1/N − 2πiα`, on the
//! vertical line `z = 1/N + iy`; in both cases `e^{−n z} = e^{−n/N} e(n t)`
//! with `t = α` or `t = −y/2π`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::accum::{two_prod, ComplexSum};
use crate::arith::SieveTable;
use crate::phase::{e_mul, sinpi};
use crate::special::{exp_power_sum, log_gamma, power_cutoff, TAIL_EPSILON};
use crate::zeros::{two_sided_sum, ZeroView};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSumConfig {
    pub ell: u32,
    /// Terms with `e^{−n^ℓ/N}` below this are dropped.
    pub tail_epsilon: f64,
}

impl ExpSumConfig {
    pub fn new(ell: u32) -> Result<Self> {
        let cfg = ExpSumConfig {
            ell,
            tail_epsilon: TAIL_EPSILON,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::invalid("power ell must be >= 1"));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(Error::invalid("tail_epsilon must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Largest `n` kept in the smoothed sums at this `N`.
    pub fn n_max(&self, n: u64) -> u64 {
        power_cutoff(1.0 / n as f64, self.ell, self.tail_epsilon)
    }

    fn pow(&self, n: u64) -> u64 {
        n.pow(self.ell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    Segment(f64),
    Vertical(f64),
}

/// The point `z` with `Re z = 1/N` at which the sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParam {
    n: u64,
    form: Form,
}

impl ComplexParam {
    /// `z = 1/N − 2πiα`.
    pub fn segment(n: u64, alpha: f64) -> Result<Self> {
        if n == 0 || !alpha.is_finite() {
            return Err(Error::invalid(format!("bad segment point N = {n}, α = {alpha}")));
        }
        Ok(ComplexParam {
            n,
            form: Form::Segment(alpha),
        })
    }

    /// `z = 1/N + iy`.
    pub fn vertical(n: u64, y: f64) -> Result<Self> {
        if n == 0 || !y.is_finite() {
            return Err(Error::invalid(format!("bad vertical point N = {n}, y = {y}")));
        }
        Ok(ComplexParam {
            n,
            form: Form::Vertical(y),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.form {
            Form::Segment(a) => Some(a),
            Form::Vertical(_) => None,
        }
    }

    pub fn z(&self) -> Complex64 {
        let re = 1.0 / self.n as f64;
        match self.form {
            Form::Segment(a) => Complex64::new(re, -2.0 * PI * a),
            Form::Vertical(y) => Complex64::new(re, y),
        }
    }

    /// `t` with `e^{−m z} = e^{−m/N} e(m t)`.
    pub fn turns(&self) -> f64 {
        match self.form {
            Form::Segment(a) => a,
            Form::Vertical(y) => -y / (2.0 * PI),
        }
    }

    /// The same point with `α` (or `y`) negated.
    pub fn conj(&self) -> Self {
        let form = match self.form {
            Form::Segment(a) => Form::Segment(-a),
            Form::Vertical(y) => Form::Vertical(-y),
        };
        ComplexParam { n: self.n, form }
    }
}

/// `Σ_j c_j e(f_j α)` with integer frequencies and real coefficients.
#[derive(Debug, Clone, Default)]
pub struct TrigPoly {
    freqs: Vec<u64>,
    coeffs: Vec<f64>,
}

impl TrigPoly {
    pub fn new(freqs: Vec<u64>, coeffs: Vec<f64>) -> Self {
        assert_eq!(freqs.len(), coeffs.len());
        TrigPoly { freqs, coeffs }
    }

    pub fn freqs(&self) -> &[u64] {
        &self.freqs
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn max_freq(&self) -> u64 {
        self.freqs.iter().copied().max().unwrap_or(0)
    }

    /// Value at `α = t`, accumulated in ascending frequency order.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (&f, &c) in self.freqs.iter().zip(&self.coeffs) {
            acc.add(c * e_mul(f as f64, t));
        }
        acc.value()
    }

    /// Values at `α_j = j/m`, `j = 0..m`, by one inverse FFT.
    pub fn samples(&self, m: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (&f, &c) in self.freqs.iter().zip(&self.coeffs) {
            buf[(f % m as u64) as usize] += c;
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_inverse(m).process(&mut buf);
        buf
    }
}

fn ensure_sieve(sieve: &SieveTable, required: u64, what: &str) -> Result<()> {
    if sieve.limit() < required {
        Err(Error::out_of_range(
            format!("sieve limit {} too small for {what}", sieve.limit()),
            required,
        ))
    } else {
        Ok(())
    }
}

/// Coefficients of `S̃_ℓ`: frequency `n^ℓ`, weight `Λ(n) e^{−n^ℓ/N}`.
pub fn s_tilde_poly(cfg: &ExpSumConfig, n: u64, sieve: &SieveTable) -> Result<TrigPoly> {
    cfg.validate()?;
    let n_max = cfg.n_max(n);
    ensure_sieve(sieve, n_max, "the smoothed exponential sum")?;
    let nf = n as f64;
    let (freqs, coeffs) = sieve
        .prime_powers()
        .iter()
        .take_while(|&&m| m <= n_max)
        .map(|&m| {
            let f = cfg.pow(m);
            (f, sieve.lambda(m) * (-(f as f64) / nf).exp())
        })
        .unzip();
    Ok(TrigPoly::new(freqs, coeffs))
}

/// Coefficients of `S_ℓ`: frequency `n^ℓ`, weight `Λ(n)`, `n <= N`.
pub fn s_classical_poly(cfg: &ExpSumConfig, n: u64, sieve: &SieveTable) -> Result<TrigPoly> {
    cfg.validate()?;
    ensure_sieve(sieve, n, "the classical exponential sum")?;
    let (freqs, coeffs) = sieve
        .prime_powers()
        .iter()
        .take_while(|&&m| m <= n)
        .map(|&m| (cfg.pow(m), sieve.lambda(m)))
        .unzip();
    Ok(TrigPoly::new(freqs, coeffs))
}

/// Coefficients of `T_ℓ`: frequency `n^ℓ`, weight 1, `n <= N`.
pub fn t_poly(cfg: &ExpSumConfig, n: u64) -> TrigPoly {
    let (freqs, coeffs) = (1..=n).map(|m| (cfg.pow(m), 1.0)).unzip();
    TrigPoly::new(freqs, coeffs)
}

/// Coefficients of `ω_ℓ`: frequency `m^ℓ`, weight `e^{−m^ℓ/N}`.
pub fn omega_poly(cfg: &ExpSumConfig, n: u64) -> TrigPoly {
    let nf = n as f64;
    let (freqs, coeffs) = (1..=cfg.n_max(n))
        .map(|m| {
            let f = cfg.pow(m);
            (f, (-(f as f64) / nf).exp())
        })
        .unzip();
    TrigPoly::new(freqs, coeffs)
}

/// `S̃_ℓ = Σ_{n≥1} Λ(n) e^{−n^ℓ z}`, tail-truncated.
pub fn s_tilde(cfg: &ExpSumConfig, p: &ComplexParam, sieve: &SieveTable) -> Result<Complex64> {
    Ok(s_tilde_poly(cfg, p.n(), sieve)?.eval(p.turns()))
}

fn segment_alpha(p: &ComplexParam, what: &str) -> Result<f64> {
    p.alpha()
        .ok_or_else(|| Error::invalid(format!("{what} is defined on the α-segment only")))
}

/// `S_ℓ(α) = Σ_{n<=N} Λ(n) e(n^ℓ α)`.
pub fn s_classical(cfg: &ExpSumConfig, p: &ComplexParam, sieve: &SieveTable) -> Result<Complex64> {
    let alpha = segment_alpha(p, "S_ℓ")?;
    Ok(s_classical_poly(cfg, p.n(), sieve)?.eval(alpha))
}

/// `T_ℓ(α) = Σ_{n<=N} e(n^ℓ α)`.
pub fn t_sum(cfg: &ExpSumConfig, p: &ComplexParam) -> Result<Complex64> {
    cfg.validate()?;
    let alpha = segment_alpha(p, "T_ℓ")?;
    Ok(t_poly(cfg, p.n()).eval(alpha))
}

/// `ω_ℓ = Σ_{m≥1} e^{−m^ℓ z}`, tail-truncated; for `ℓ = 2` it shares its
/// evaluation with `θ`, so `2ω₂ + 1 = θ(z)`.
pub fn omega(cfg: &ExpSumConfig, p: &ComplexParam) -> Result<Complex64> {
    cfg.validate()?;
    exp_power_sum(p.z(), cfg.ell, cfg.tail_epsilon)
}

/// `sin(π m t)` with `m t` reduced exactly modulo 2.
fn sinpi_mul(m: f64, t: f64) -> f64 {
    let (hi, lo) = two_prod(m, t);
    let r = hi - 2.0 * (hi / 2.0).round();
    sinpi(r + lo)
}

/// `U(α, H) = Σ_{1<=m<=H} e(mα)`.
pub fn u_sum(alpha: f64, h: u64) -> Complex64 {
    let den = sinpi(alpha);
    if den == 0.0 {
        // e(α) = 1
        return Complex64::new(h as f64, 0.0);
    }
    let hf = h as f64;
    e_mul(hf + 1.0, 0.5 * alpha) * (sinpi_mul(hf, alpha) / den)
}

/// `f₂(α) = ½ Σ_{m<=N} m^{−1/2} e(mα)`.
pub fn f2(n: u64, alpha: f64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for m in 1..=n {
        let mf = m as f64;
        acc.add(e_mul(mf, alpha) / mf.sqrt());
    }
    0.5 * acc.value()
}

/// `Γ(1/ℓ) / (ℓ z^{1/ℓ})`.
pub fn linnik_main(cfg: &ExpSumConfig, p: &ComplexParam) -> Result<Complex64> {
    let inv = 1.0 / cfg.ell as f64;
    let lg = log_gamma(Complex64::new(inv, 0.0))?;
    Ok(inv * (lg - inv * p.z().ln()).exp())
}

/// `z^{−w} Γ(w)` as one exponential.
pub fn zpow_gamma(z: Complex64, w: Complex64) -> Result<Complex64> {
    Ok((log_gamma(w)? - w * z.ln()).exp())
}

/// `Σ_ρ z^{−ρ/ℓ} Γ(ρ/ℓ)` over `ρ` and `ρ̄`. Off the real axis the summand at
/// `ρ̄` is not the conjugate of the one at `ρ`, so both are evaluated.
pub fn linnik_zero_sum(cfg: &ExpSumConfig, p: &ComplexParam, zeros: ZeroView<'_>) -> Result<Complex64> {
    let inv = 1.0 / cfg.ell as f64;
    let z = p.z();
    two_sided_sum(zeros, |rho| zpow_gamma(z, rho * inv))
}

/// `Γ(1/ℓ)/(ℓ z^{1/ℓ}) − (1/ℓ) Σ_ρ z^{−ρ/ℓ} Γ(ρ/ℓ)`.
pub fn linnik_approx(cfg: &ExpSumConfig, p: &ComplexParam, zeros: ZeroView<'_>) -> Result<Complex64> {
    cfg.validate()?;
    let inv = 1.0 / cfg.ell as f64;
    Ok(linnik_main(cfg, p)? - inv * linnik_zero_sum(cfg, p, zeros)?)
}

/// `E(N, y) = S̃₁(z) − 1/z + Σ_ρ z^{−ρ}Γ(ρ)` at `z = 1/N + iy`.
pub fn linnik_vertical(n: u64, y: f64, zeros: ZeroView<'_>, sieve: &SieveTable) -> Result<Complex64> {
    let cfg = ExpSumConfig::new(1)?;
    let p = ComplexParam::vertical(n, y)?;
    let z = p.z();
    let zero_sum = two_sided_sum(zeros, |rho| zpow_gamma(z, rho))?;
    Ok(s_tilde(&cfg, &p, sieve)? - z.inv() + zero_sum)
}

/// Shape of the vertical-line bound, `1 + |z|^{1/2}(1 + log²(N|y|))`.
pub fn vertical_bound_shape(n: u64, y: f64) -> f64 {
    let z = Complex64::new(1.0 / n as f64, y);
    let ny = n as f64 * y.abs();
    let log_term = if ny > 0.0 { ny.ln().powi(2) } else { 0.0 };
    1.0 + z.norm().sqrt() * (1.0 + log_term)
}
