//! Jacobi theta `θ(z) = Σ_{m∈ℤ} e^{−m²z}` and its modular relation
//! `θ(z) = (π/z)^{1/2} θ(π²/z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::accum::ComplexSum;
use crate::phase::e_mul;
use crate::{Error, Result};

/// Default tail threshold for the truncated exponential sums.
pub const TAIL_EPSILON: f64 = 1e-18;

/// Largest `m` with `e^{−m^ℓ·decay} >= eps`.
pub fn power_cutoff(decay: f64, ell: u32, eps: f64) -> u64 {
    let budget = -eps.ln() / decay;
    let mut m = budget.powf(1.0 / ell as f64).floor() as u64;
    while m > 0 && (m as f64).powi(ell as i32) * decay > -eps.ln() {
        m -= 1;
    }
    while ((m + 1) as f64).powi(ell as i32) * decay <= -eps.ln() {
        m += 1;
    }
    m
}

/// `Σ_{m≥1} e^{−m^ℓ z}`, dropping terms with `e^{−m^ℓ Re z} < eps`.
///
/// The phase is reduced in turns: with `t = −Im z / 2π`, each term is
/// `e^{−m^ℓ Re z}·e(m^ℓ t)`.
pub fn exp_power_sum(z: Complex64, ell: u32, eps: f64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("need Re z > 0, got z = {z}")));
    }
    if ell == 0 {
        return Err(Error::invalid("power ell must be >= 1"));
    }
    let m_max = power_cutoff(z.re, ell, eps);
    if (m_max as f64).powi(ell as i32) > 2f64.powi(53) {
        return Err(Error::out_of_range("power sum cutoff beyond exact integers", m_max));
    }
    let t = -z.im / (2.0 * PI);
    let mut acc = ComplexSum::new();
    for m in 1..=m_max {
        let mp = (m as f64).powi(ell as i32);
        acc.add((-mp * z.re).exp() * e_mul(mp, t));
    }
    Ok(acc.value())
}

/// `θ(z) = 1 + 2 Σ_{m≥1} e^{−m²z}` for `Re z > 0`.
pub fn theta(z: Complex64) -> Result<Complex64> {
    Ok(1.0 + 2.0 * exp_power_sum(z, 2, TAIL_EPSILON)?)
}

/// `|θ(z) − (π/z)^{1/2} θ(π²/z)|` with the principal square root.
pub fn theta_modular_residual(z: Complex64) -> Result<f64> {
    let dual = PI * PI / z;
    if !(dual.re > 0.0) {
        return Err(Error::Domain(format!("need Re(π²/z) > 0, got z = {z}")));
    }
    let lhs = theta(z)?;
    let rhs = (PI / z).sqrt() * theta(dual)?;
    Ok((lhs - rhs).norm())
}
