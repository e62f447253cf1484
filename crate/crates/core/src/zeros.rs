//! Ordinates of the nontrivial zeros of `ζ(s)`.
//!
//! Only `γ > 0` is stored; every zero is taken as `ρ = 1/2 + iγ` and its
//! conjugate `1/2 − iγ` is synthesized by the pair sums.

use std::f64::consts::{E, PI};
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::accum::ComplexSum;
use crate::{Error, Result};

/// Ordinates in ascending order.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    source: String,
}

/// A prefix of a [`ZeroTable`] (all `γ <= T`).
#[derive(Debug, Clone, Copy)]
pub struct ZeroView<'a> {
    gammas: &'a [f64],
}

/// Real part of every zero.
pub const BETA: f64 = 0.5;

/// Riemann–von Mangoldt main term `(T/2π) log(T/2πe) + 7/8`.
pub fn counting_estimate(t: f64) -> f64 {
    t / (2.0 * PI) * (t / (2.0 * PI * E)).ln() + 0.875
}

impl ZeroTable {
    /// Validates and wraps a list of ordinates.
    pub fn from_ordinates(gammas: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        let first = *gammas
            .first()
            .ok_or_else(|| Error::Validation("zero table is empty".into()))?;
        if !(first > 14.0 && first < 14.3) {
            return Err(Error::Validation(format!(
                "first ordinate {first} is not the first zero (expected in (14.0, 14.3))"
            )));
        }
        for (i, w) in gammas.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::Validation(format!(
                    "ordinates not strictly ascending at entry {}: {} then {}",
                    i + 2,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(ZeroTable {
            gammas,
            source: source.into(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Largest stored ordinate.
    pub fn max_height(&self) -> f64 {
        *self.gammas.last().unwrap_or(&0.0)
    }

    pub fn view(&self) -> ZeroView<'_> {
        ZeroView {
            gammas: &self.gammas,
        }
    }

    /// All zeros with `γ <= t`.
    pub fn truncate(&self, t: f64) -> ZeroView<'_> {
        self.view().truncate(t)
    }

    /// `(count of γ <= t, counting_estimate(t))`.
    pub fn counting_check(&self, t: f64) -> (usize, f64) {
        (self.truncate(t).len(), counting_estimate(t))
    }

    /// Checks the counting invariant at each height the table covers.
    pub fn validate_counting(&self, heights: &[f64], slack: f64) -> Result<()> {
        for &t in heights.iter().filter(|&&t| t <= self.max_height()) {
            let (count, est) = self.counting_check(t);
            if (count as f64 - est).abs() > slack {
                return Err(Error::Validation(format!(
                    "{count} zeros up to height {t}, counting formula gives {est:.2}"
                )));
            }
        }
        Ok(())
    }
}

impl<'a> ZeroView<'a> {
    pub fn empty() -> ZeroView<'static> {
        ZeroView { gammas: &[] }
    }

    pub fn truncate(&self, t: f64) -> ZeroView<'a> {
        let end = self.gammas.partition_point(|&g| g <= t);
        ZeroView {
            gammas: &self.gammas[..end],
        }
    }

    /// The first `n` zeros.
    pub fn first(&self, n: usize) -> ZeroView<'a> {
        ZeroView {
            gammas: &self.gammas[..n.min(self.gammas.len())],
        }
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gammas(&self) -> &'a [f64] {
        self.gammas
    }

    /// Largest ordinate in the view, 0 if empty.
    pub fn height(&self) -> f64 {
        *self.gammas.last().unwrap_or(&0.0)
    }

    /// `ρ = 1/2 + iγ` for each stored `γ`.
    pub fn rhos(&self) -> impl Iterator<Item = Complex64> + 'a {
        self.gammas.iter().map(|&g| Complex64::new(BETA, g))
    }
}

fn check_finite(value: Complex64, gamma: f64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { gamma })
    }
}

/// `Σ_ρ f(ρ)` over `ρ` and `ρ̄`, computed as `Σ_{γ>0} 2 Re term(γ)`.
///
/// Valid when the summand at `ρ̄` is the conjugate of the summand at `ρ`;
/// the result is returned with zero imaginary part.
pub fn conjugate_pair_sum(view: ZeroView<'_>, mut term: impl FnMut(f64) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = ComplexSum::new();
    for &g in view.gammas() {
        let v = check_finite(term(g)?, g)?;
        acc.add(Complex64::new(2.0 * v.re, 0.0));
    }
    Ok(acc.value())
}

/// `Σ_ρ [f(ρ) + f(ρ̄)]` evaluated literally, for summands without conjugate
/// symmetry or to measure how far a symmetric one is from real.
pub fn two_sided_sum(view: ZeroView<'_>, mut f: impl FnMut(Complex64) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = ComplexSum::new();
    for rho in view.rhos() {
        acc.add(check_finite(f(rho)?, rho.im)?);
        acc.add(check_finite(f(rho.conj())?, rho.im)?);
    }
    Ok(acc.value())
}

fn significant_digits(token: &str) -> usize {
    let mantissa = token.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

/// Parses zero-file text: one ordinate per line, `#` comments, blank lines
/// ignored.
pub fn parse_zeros(text: &str, path: &Path) -> Result<ZeroTable> {
    let mut gammas = Vec::new();
    let mut warned = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Format {
            path: path.to_path_buf(),
            line: idx + 1,
            content: raw.to_string(),
        })?;
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Validation(format!(
                "{}:{}: ordinate must be positive, got {value}",
                path.display(),
                idx + 1
            )));
        }
        if !warned && significant_digits(line) > 17 {
            log::warn!(
                "{}: ordinates carry more digits than double precision holds; truncating",
                path.display()
            );
            warned = true;
        }
        gammas.push(value);
    }
    ZeroTable::from_ordinates(gammas, path.display().to_string())
}

/// Reads and validates a zero file.
pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })?;
    parse_zeros(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ZeroTable> {
        parse_zeros(text, Path::new("test.txt"))
    }

    #[test]
    fn parses_small_file() {
        let t = parse("# header\n14.134725\n21.022040\n\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.truncate(15.0).len(), 1);
        assert!(t.truncate(10.0).is_empty());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse("21.0\n14.1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse(""), Err(Error::Validation(_))));
        assert!(matches!(parse("# only\n"), Err(Error::Validation(_))));
        assert!(matches!(parse("-14.1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse("15.0\n"), Err(Error::Validation(_))));
        match parse("14.134725\nabc\n") {
            Err(Error::Format { line, content, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(content, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_zeros("/nonexistent/zeros.txt"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn pair_sums() {
        let t = parse("14.134725\n21.022040\n25.010858\n").unwrap();
        let one = conjugate_pair_sum(t.view(), |_| Ok(Complex64::new(1.0, 0.0))).unwrap();
        assert_eq!(one, Complex64::new(6.0, 0.0));
        let i = conjugate_pair_sum(t.view(), |_| Ok(Complex64::i())).unwrap();
        assert_eq!(i, Complex64::new(0.0, 0.0));
        let two = two_sided_sum(t.view(), |rho| Ok(rho)).unwrap();
        assert!((two - 3.0).norm() < 1e-15);
        assert!(matches!(
            conjugate_pair_sum(t.view(), |g| Ok(Complex64::new(if g > 20.0 { f64::NAN } else { 1.0 }, 0.0))),
            Err(Error::NonFinite { gamma }) if gamma == 21.022040
        ));
    }

    #[test]
    fn digit_counting() {
        assert_eq!(significant_digits("14.134725141734693790457"), 23);
        assert_eq!(significant_digits("0.00123"), 3);
    }
}
