//! Complex log-Gamma.
//!
//! Stirling's series with ten Bernoulli corrections once `|s| >= 12`, an
//! upward shift for smaller arguments in the right half-plane, and the
//! reflection formula for `Re s < 1/2`. In the reflection, `log sin(πz)` is
//! taken on the branch that is continuous in each half-plane, so the result is
//! the principal branch of `log Γ` (continuous off the negative real axis, and
//! equal to the upper-half-plane limit on it).

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::accum::ComplexSum;
use crate::phase::{cospi, sinpi};
use crate::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 12.0;

/// `B_{2k} / (2k (2k − 1))` for `k = 1..=10`.
const STIRLING_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

fn stirling(s: Complex64) -> Complex64 {
    let inv = s.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    for &c in STIRLING_COEFFS.iter().rev() {
        corr = corr * inv2 + c;
    }
    (s - 0.5) * s.ln() - s + HALF_LN_2PI + corr * inv
}

/// `log Γ(s)` for `Re s >= 1/2`.
fn log_gamma_right(s: Complex64) -> Complex64 {
    if s.norm() >= STIRLING_MIN {
        return stirling(s);
    }
    let shift = (STIRLING_MIN - s.re).ceil().max(0.0) as usize;
    let mut logs = ComplexSum::new();
    for j in 0..shift {
        logs.add((s + j as f64).ln());
    }
    stirling(s + shift as f64) - logs.value()
}

/// `log sin(πz)` on the branch continuous in the closed upper half-plane
/// (and its mirror image below), without overflow for large `|Im z|`.
fn log_sinpi(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let a = PI * y.abs();
    let s = sinpi(x);
    let re = if a > 1.0 {
        let ln_sinh = a - LN_2 + (-(-2.0 * a).exp()).ln_1p();
        if a < 700.0 {
            ln_sinh + 0.5 * (s / a.sinh()).powi(2).ln_1p()
        } else {
            ln_sinh
        }
    } else {
        0.5 * (s * s + a.sinh().powi(2)).ln()
    };
    // sin(πz) = (i/2) e^{π|y|} e^{−iπx} (1 − e^{2πix − 2π|y|}) for y >= 0
    let q = (-2.0 * a).exp();
    let delta = (-q * sinpi(2.0 * x)).atan2(1.0 - q * cospi(2.0 * x));
    let arg = PI / 2.0 - PI * x + delta;
    let arg = if y < 0.0 { -arg } else { arg };
    Complex64::new(re, arg)
}

/// Principal branch of `log Γ(s)`.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite argument {s}")));
    }
    if is_pole(s) {
        return Err(Error::Pole(s));
    }
    if s.im == 0.0 && s.re == s.re.round() && s.re <= 30.0 {
        // exact small factorials: log((n−1)!)
        let n = s.re as u32;
        return Ok(Complex64::new((2..n).map(|k| (k as f64).ln()).sum(), 0.0));
    }
    if s.re >= 0.5 {
        Ok(log_gamma_right(s))
    } else {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        Ok(LN_PI - log_sinpi(s) - log_gamma_right(one_minus))
    }
}

/// `log Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma_real needs x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// `Γ(s)`, formed as `exp(log Γ(s))`.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    Ok(log_gamma(s)?.exp())
}

/// `Γ(num) / Γ(den)` in the log domain.
pub fn gamma_ratio(num: Complex64, den: Complex64) -> Result<Complex64> {
    Ok((log_gamma(num)? - log_gamma(den)?).exp())
}

/// `1/Γ(s)`, entire: zero at the poles of `Γ`.
pub fn recip_gamma(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-log_gamma(s)?).exp())
}
