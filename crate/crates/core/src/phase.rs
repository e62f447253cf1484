//! Unit-circle helpers: `e(x) = exp(2πix)` with argument reduction done in
//! turns, so that large integer multiples of a frequency keep full accuracy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::accum::two_prod;

/// `sin(πx)`, exact at integers and half-integers.
pub fn sinpi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0 * x.signum();
    }
    (PI * r).sin()
}

/// `cos(πx)`, exact at integers and half-integers.
pub fn cospi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 0.5 {
        return 0.0;
    }
    (PI * r).cos()
}

/// Fractional part of `x` in `[−1/2, 1/2]`.
#[inline]
pub fn wrap(x: f64) -> f64 {
    x - x.round()
}

/// `e(x) = exp(2πix)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * wrap(x)).sin_cos();
    Complex64::new(c, s)
}

/// Fractional part of `m·t` computed from the exact product, for integer `m`
/// up to `2^53`.
#[inline]
pub fn frac_product(m: f64, t: f64) -> f64 {
    let (hi, lo) = two_prod(m, t);
    wrap(wrap(hi) + lo)
}

/// `e(m·t)` with the product reduced exactly.
#[inline]
pub fn e_mul(m: f64, t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * frac_product(m, t)).sin_cos();
    Complex64::new(c, s)
}
