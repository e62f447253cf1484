//! Quadrature engine.
//!
//! Composite Gauss–Legendre on panels whose widths follow the local
//! oscillation frequency of the integrand (at most a quarter period per
//! panel), with refinement by panel bisection until two rule orders agree.
//! Full-period band-limited integrands use the trapezoid rule instead, which
//! is exact once the sample count exceeds the bandwidth.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::accum::ComplexSum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Upper bound on the number of panels in any layout.
    pub max_panels: usize,
    /// Gauss–Legendre order per panel; the check order is twice this.
    pub points_per_panel: usize,
    /// Largest oscillation frequency (cycles per unit length) the engine
    /// will resolve.
    pub osc_freq_cap: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            max_panels: 1 << 22,
            points_per_panel: 8,
            osc_freq_cap: 1e9,
            abs_tol: 1e-14,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_panels == 0 || self.points_per_panel == 0 {
            return Err(Error::invalid("quadrature needs at least one panel and one point"));
        }
        if !(self.osc_freq_cap > 0.0 && self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances and caps must be positive"));
        }
        Ok(())
    }

    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre order must be >= 1");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Breakpoints of `[a, b]` such that each panel is at most a quarter period
/// of the local frequency `freq` (cycles per unit), evaluated at both ends
/// of the panel, and no wider than `max_width`.
pub fn oscillatory_panels(
    a: f64,
    b: f64,
    freq: impl Fn(f64) -> f64,
    max_width: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(b > a) {
        return Ok(vec![a, a]);
    }
    let mut breaks = vec![a];
    let mut x = a;
    while x < b {
        let f0 = freq(x).abs();
        if f0 > spec.osc_freq_cap {
            return Err(Error::accuracy("oscillation frequency above cap", f0, spec.osc_freq_cap));
        }
        let mut w = max_width.min(0.25 / f0.max(1e-300));
        // shrink until the right end respects the quarter-period rule too
        while w > 0.0 && freq((x + w).min(b)).abs() * w > 0.25 * (1.0 + 1e-12) {
            w *= 0.5;
        }
        if !(w > 0.0) || w < (b - a) * 1e-15 {
            return Err(Error::accuracy("panel width collapsed", w, (b - a) * 1e-15));
        }
        x = (x + w).min(b);
        breaks.push(x);
        if breaks.len() > spec.max_panels + 1 {
            return Err(Error::accuracy(
                "panel budget exceeded",
                breaks.len() as f64,
                spec.max_panels as f64,
            ));
        }
    }
    Ok(breaks)
}

/// Equispaced breakpoints.
pub fn uniform_panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

fn composite(rule: &GaussLegendre, breaks: &[f64], f: &mut impl FnMut(f64) -> Complex64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for w in breaks.windows(2) {
        acc.add(rule.integrate(w[0], w[1], &mut *f));
    }
    acc.value()
}

/// Composite Gauss–Legendre on `breaks` at orders `p` and `2p`; panels are
/// bisected until the two agree to tolerance.
pub fn integrate_panels<F: FnMut(f64) -> Complex64>(
    breaks: &[f64],
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let low = GaussLegendre::new(spec.points_per_panel);
    let high = GaussLegendre::new(2 * spec.points_per_panel);
    let mut breaks = breaks.to_vec();
    loop {
        let a = composite(&low, &breaks, &mut f);
        let b = composite(&high, &breaks, &mut f);
        let error = (a - b).norm();
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::accuracy("non-finite integrand", f64::INFINITY, 0.0));
        }
        if error <= spec.tolerance(b.norm()) {
            return Ok(Estimate { value: b, error });
        }
        if 2 * (breaks.len() - 1) > spec.max_panels {
            return Err(Error::accuracy("quadrature refinement", error, spec.tolerance(b.norm())));
        }
        breaks = bisect(&breaks);
    }
}

fn bisect(breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for w in breaks.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*breaks.last().unwrap());
    out
}

/// `∫_a^b f` for an integrand with local frequency bound `freq`.
pub fn integrate_oscillatory<F: FnMut(f64) -> Complex64>(
    a: f64,
    b: f64,
    f: F,
    freq: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let breaks = oscillatory_panels(a, b, freq, (b - a).max(0.0), spec)?;
    integrate_panels(&breaks, f, spec)
}

/// `∫_{−1/2}^{1/2} g(α) dα` from `g` sampled at `α_j = j/M`, `j = 0..M`; exact
/// for trigonometric polynomials of degree below `M`.
pub fn periodic_trapezoid(samples: &[Complex64]) -> Complex64 {
    let m = samples.len() as f64;
    samples.iter().copied().sum::<ComplexSum>().value() / m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        for n in [1usize, 2, 5, 8, 16, 31] {
            let rule = GaussLegendre::new(n);
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n = {n}");
            for deg in 0..(2 * n) {
                let got = rule.integrate(-1.0, 1.0, |x| Complex64::new(x.powi(deg as i32), 0.0)).re;
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n = {n}, deg = {deg}");
            }
        }
    }

    #[test]
    fn oscillatory_integral() {
        let spec = QuadratureSpec::default();
        let omega = 500.0;
        let est = integrate_oscillatory(
            0.0,
            3.0,
            |x| Complex64::new((omega * x).cos(), 0.0),
            |_| omega / (2.0 * PI),
            &spec,
        )
        .unwrap();
        let want = (3.0 * omega).sin() / omega;
        assert!((est.value.re - want).abs() < 1e-13);
        assert!(est.error < 1e-12);
    }

    #[test]
    fn panels_respect_quarter_period() {
        let spec = QuadratureSpec::default();
        let freq = |x: f64| 1.0 + 100.0 * x;
        let b = oscillatory_panels(0.0, 2.0, freq, 1.0, &spec).unwrap();
        for w in b.windows(2) {
            let f = freq(w[0]).max(freq(w[1]));
            assert!((w[1] - w[0]) * f <= 0.25 * (1.0 + 1e-9));
        }
        assert_eq!(*b.last().unwrap(), 2.0);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let spec = QuadratureSpec {
            max_panels: 10,
            ..QuadratureSpec::default()
        };
        assert!(matches!(
            oscillatory_panels(0.0, 1.0, |_| 1e3, 1.0, &spec),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn trapezoid_exact_for_trig_polynomials() {
        let m = 16;
        let samples: Vec<Complex64> = (0..m)
            .map(|j| {
                let a = j as f64 / m as f64;
                let s = Complex64::from_polar(1.0, 2.0 * PI * 3.0 * a) + 2.0;
                s * s.conj()
            })
            .collect();
        assert!((periodic_trapezoid(&samples) - 5.0).norm() < 1e-14);
    }
}
