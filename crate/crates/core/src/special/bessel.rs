//! Bessel functions of the first kind, complex order, positive real argument.
//!
//! Four evaluations:
//! * the power series, for `u <= 50`;
//! * Sonine's integral `(u/2)^ν/(2πi) ∫ s^{−ν−1} e^{s − u²/4s} ds` along
//!   `Re s = a`. The line is closed into a Hankel-type contour: the segment
//!   `|Im s| <= h` plus the horizontal rays `Im s = ±h` running to
//!   `Re s = −∞`. Cauchy's theorem makes this exact, and both rays decay
//!   like `e^{Re s}`, whereas the line itself decays only like `|t|^{−Re ν−1}`;
//! * Poisson's integral `(u/2)^ν/(√π Γ(ν+½)) ∫_0^π cos(u cos θ) sin^{2ν}θ dθ`
//!   for `Re ν > 0`, whose cost grows only linearly in `u`. [`lattice_family`]
//!   evaluates it for all `ℓu`, `ℓ = 1..=L`, on one panel layout. For real
//!   order and large `u` the integral cancels down to `O(u^{−Re ν−1/2})`, so
//!   its error is small in absolute terms but not relative to `J_ν(u)`;
//!   [`bessel_j`] prefers Hankel's expansion there;
//! * Hankel's asymptotic expansion, when `|ν|² ≪ u`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::accum::ComplexSum;
use crate::quad::{integrate_panels, oscillatory_panels, GaussLegendre, QuadratureSpec};
use crate::special::gamma::log_gamma;
use crate::{Error, Result};

/// Largest argument accepted by [`bessel_j_series`].
pub const SERIES_MAX_U: f64 = 50.0;
const SERIES_MAX_TERMS: usize = 500;
const DISPATCH_SERIES_MAX_U: f64 = 12.0;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

fn check_order(nu: Complex64, min_re: f64) -> Result<()> {
    if !(nu.re > min_re) || !nu.im.is_finite() {
        return Err(Error::Domain(format!("Bessel order needs Re ν > {min_re}, got {nu}")));
    }
    Ok(())
}

fn check_arg(u: f64) -> Result<()> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {u}")));
    }
    Ok(())
}

/// `J_ν(u) = Σ_m (−1)^m (u/2)^{ν+2m} / (m! Γ(ν+m+1))`.
pub fn bessel_j_series(nu: Complex64, u: f64) -> Result<Complex64> {
    check_order(nu, -1.0)?;
    if u == 0.0 {
        return Ok(if nu == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    check_arg(u)?;
    if u > SERIES_MAX_U {
        return Err(Error::Domain(format!("series regime is u <= {SERIES_MAX_U}, got {u}")));
    }
    let half = 0.5 * u;
    let q = -half * half;
    let mut term = (nu * half.ln() - log_gamma(nu + 1.0)?).exp();
    let mut acc = ComplexSum::new();
    acc.add(term);
    for m in 0..SERIES_MAX_TERMS {
        let mf = m as f64;
        term *= q / ((mf + 1.0) * (nu + mf + 1.0));
        acc.add(term);
        let total = acc.value();
        // past the peak the terms decrease monotonically
        if mf > half && term.norm() < 1e-18 * total.norm() {
            return Ok(total);
        }
        if total.norm() == 0.0 && term.norm() == 0.0 {
            return Ok(total);
        }
    }
    Err(Error::accuracy(
        "Bessel series did not converge",
        term.norm(),
        1e-18 * acc.value().norm(),
    ))
}

/// `J_ν(u)` from Sonine's contour integral with the line at `Re s = a`.
pub fn bessel_j_sonine(nu: Complex64, u: f64, a: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    check_order(nu, -1.0)?;
    check_arg(u)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Sonine line needs a > 0, got {a}")));
    }
    let nu1 = nu + 1.0;
    let q = 0.25 * u * u;
    let integrand = |s: Complex64| (-nu1 * s.ln() + s - q / s).exp();
    let h = (q).max(2.0 * nu.im.abs()).max(30.0);

    // vertical segment s = a + it, |t| <= h
    let vfreq = |t: f64| {
        let r2 = a * a + t * t;
        (1.0 + q / r2 + nu1.norm() / r2.sqrt()) / (2.0 * PI)
    };
    let vbreaks = oscillatory_panels(-h, h, vfreq, 1.0, quad)?;
    let vertical = integrate_panels(&vbreaks, |t| integrand(Complex64::new(a, t)), quad)?;

    // rays s = a − x ± ih, 0 <= x <= X
    let x_max = a + 45.0 + (nu1.re.abs() + 1.0) * (a * a + h * h).sqrt().ln().abs() + PI * nu.im.abs();
    let rfreq = |x: f64| {
        let r = ((a - x).powi(2) + h * h).sqrt();
        (q / (r * r) + nu1.norm() / r) / (2.0 * PI)
    };
    let rbreaks = oscillatory_panels(0.0, x_max, rfreq, 1.0, quad)?;
    let rays = integrate_panels(
        &rbreaks,
        |x| integrand(Complex64::new(a - x, -h)) - integrand(Complex64::new(a - x, h)),
        quad,
    )?;

    let contour = rays.value + Complex64::i() * vertical.value;
    let pref = (nu * (0.5 * u).ln()).exp() / Complex64::new(0.0, 2.0 * PI);
    Ok(pref * contour)
}

/// `J_ν(ℓu)/ℓ^ν` for `ℓ = 1..=L`, as `exp(log_prefactor)·integrals[ℓ−1]`.
#[derive(Debug, Clone)]
pub struct LatticeFamily {
    pub log_prefactor: Complex64,
    pub integrals: Vec<Complex64>,
    /// Absolute error estimates on the scale of `integrals`.
    pub errors: Vec<f64>,
}

impl LatticeFamily {
    pub fn value(&self, ell: usize) -> Complex64 {
        self.log_prefactor.exp() * self.integrals[ell - 1]
    }
}

/// Poisson-integral evaluation of `J_ν(ℓu)/ℓ^ν`, `ℓ = 1..=ell_max`, sharing
/// the `θ`-grid. `(ℓu/2)^ν/ℓ^ν = (u/2)^ν`, so every member has the same
/// prefactor and `cos(ℓ u cos θ)` comes from the Chebyshev recurrence.
pub fn lattice_family(
    nu: Complex64,
    u: f64,
    ell_max: usize,
    quad: &QuadratureSpec,
) -> Result<LatticeFamily> {
    check_order(nu, 0.0)?;
    check_arg(u)?;
    if ell_max == 0 {
        return Err(Error::invalid("ell_max must be >= 1"));
    }
    quad.validate()?;
    let log_prefactor =
        nu * (0.5 * u).ln() - LN_SQRT_PI - log_gamma(nu + 0.5)? + std::f64::consts::LN_2;

    // ∫_0^{θ_min} sin^{2 Re ν}θ dθ < 1e-18
    let theta_min = (1e-18f64).powf(1.0 / (2.0 * nu.re + 1.0)).min(0.25);
    let big_l = ell_max as f64;
    let two_gamma = 2.0 * nu.im.abs();
    // phase speed of cos(ℓu cos θ) and of sin^{2iγ}θ
    let freq = |t: f64| (big_l * u * t.sin() + two_gamma / t.tan()) / (2.0 * PI);
    // geometric segments for the algebraic behaviour at θ = 0
    let mut breaks = vec![theta_min];
    let mut lo = theta_min;
    while lo < FRAC_PI_2 {
        let hi = (2.0 * lo).min(FRAC_PI_2);
        let seg = oscillatory_panels(lo, hi, freq, 0.25, quad)?;
        breaks.extend_from_slice(&seg[1..]);
        lo = hi;
    }
    if breaks.len() > quad.max_panels + 1 {
        return Err(Error::accuracy("Poisson panel budget", breaks.len() as f64, quad.max_panels as f64));
    }

    let low = GaussLegendre::new(quad.points_per_panel);
    let high = GaussLegendre::new(2 * quad.points_per_panel);
    let two_nu_c = 2.0 * nu;
    let run = |rule: &GaussLegendre| -> Vec<Complex64> {
        let mut sums = vec![ComplexSum::new(); ell_max];
        let mut cheb = vec![0.0f64; ell_max + 1];
        for w in breaks.windows(2) {
            for (t, wt) in rule.mapped(w[0], w[1]) {
                let weight = wt * (two_nu_c * t.sin().ln()).exp();
                let x = u * t.cos();
                let c1 = x.cos();
                cheb[0] = 1.0;
                cheb[1] = c1;
                for l in 2..=ell_max {
                    cheb[l] = 2.0 * c1 * cheb[l - 1] - cheb[l - 2];
                }
                for l in 1..=ell_max {
                    sums[l - 1].add(weight * cheb[l]);
                }
            }
        }
        sums.iter().map(|s| s.value()).collect()
    };
    let a = run(&low);
    let b = run(&high);
    let errors = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).collect();
    Ok(LatticeFamily {
        log_prefactor,
        integrals: b,
        errors,
    })
}

/// `J_ν(u)` from Poisson's integral, `Re ν > 0`.
pub fn bessel_j_poisson(nu: Complex64, u: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    let fam = lattice_family(nu, u, 1, quad)?;
    let scale = quad.tolerance(fam.integrals[0].norm()).max(1e-15);
    if fam.errors[0] > scale {
        return Err(Error::accuracy("Poisson Bessel integral", fam.errors[0], scale));
    }
    Ok(fam.value(1))
}

/// Hankel's large-argument expansion
/// `J_ν(u) = √(2/πu) (P cos χ − Q sin χ)`, `χ = u − (ν/2 + 1/4)π`.
/// Returns `None` unless the asymptotic terms fall below `1e-17` of the sum
/// before they start to grow.
pub fn bessel_j_hankel(nu: Complex64, u: f64) -> Option<Complex64> {
    let mu = 4.0 * nu * nu;
    let mut p = ComplexSum::new();
    let mut q = ComplexSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    p.add(term);
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * u);
        let mag = term.norm();
        let chi = u - (0.5 * nu + 0.25) * PI;
        let amp = (2.0 / (PI * u)).sqrt();
        if mag == 0.0 {
            // half-integer order: the expansion terminates
            return Some(amp * (p.value() * chi.cos() - q.value() * chi.sin()));
        }
        if mag > last {
            return None;
        }
        last = mag;
        // a_k enters P (k even) or Q (k odd) with sign (−1)^{⌊k/2⌋}
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p.add(signed);
        } else {
            q.add(signed);
        }
        let scale = p.value().norm().max(q.value().norm());
        if mag < 1e-17 * scale {
            return Some(amp * (p.value() * chi.cos() - q.value() * chi.sin()));
        }
    }
    None
}

/// `J_ν(u)` by the most suitable route.
pub fn bessel_j(nu: Complex64, u: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    // the series cancels by roughly e^u/√u; beyond u = 12 that costs digits
    if u <= DISPATCH_SERIES_MAX_U {
        return bessel_j_series(nu, u);
    }
    check_order(nu, -1.0)?;
    check_arg(u)?;
    if let Some(v) = bessel_j_hankel(nu, u) {
        Ok(v)
    } else if nu.re > 0.0 {
        // the lattice integrand oscillates too fast when Im ν dominates Re ν
        match bessel_j_poisson(nu, u, quad) {
            Err(Error::Accuracy { .. }) => bessel_j_sonine(nu, u, 1.0, quad),
            r => r,
        }
    } else {
        bessel_j_sonine(nu, u, 1.0, quad)
    }
}
