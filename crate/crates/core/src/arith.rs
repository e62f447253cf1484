//! Arithmetic ground truth: the von Mangoldt sieve and brute-force
//! representation counts for the additive problems.
//!
//! All counts are over ordered tuples. Goldbach and Hardy-Littlewood counts
//! weight every prime power `m` by `Λ(m)`; the prime-square problems weight
//! primes only, by `log p`. Aggregates over ranges of `n` (cumulative, short
//! interval, Cesàro, exponentially weighted) enumerate the summand tuples
//! directly instead of recomputing each `n`, which keeps the Goldbach pair
//! sums at `O(π(N)²)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::accum::CompensatedSum;
use crate::special::log_gamma;
use crate::{Error, Result};

/// Largest sieve the crate builds in one piece.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Von Mangoldt values and prime flags for `1..=limit`.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    lambda: Vec<f64>,
    is_prime: Vec<bool>,
    primes: Vec<u64>,
    prime_powers: Vec<u64>,
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `Λ(n)`; zero outside `1..=limit`.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        if n > self.limit {
            0.0
        } else {
            self.lambda[n as usize]
        }
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.is_prime[n as usize]
    }

    /// `log p` if `n = p` is prime, else 0.
    #[inline]
    pub fn log_if_prime(&self, n: u64) -> f64 {
        if self.is_prime(n) {
            self.lambda[n as usize]
        } else {
            0.0
        }
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime powers `p^k`, `k >= 1`, up to the limit, ascending.
    pub fn prime_powers(&self) -> &[u64] {
        &self.prime_powers
    }

    /// Chebyshev's `ψ(x) = Σ_{n ≤ x} Λ(n)`.
    pub fn psi(&self, x: u64) -> f64 {
        let x = x.min(self.limit);
        let end = self.prime_powers.partition_point(|&m| m <= x);
        self.prime_powers[..end]
            .iter()
            .map(|&m| self.lambda[m as usize])
            .sum::<CompensatedSum>()
            .value()
    }

    /// Returns `(|ψ(x) − x|, 3·√x·log²x)`.
    pub fn chebyshev_check(&self, x: u64) -> (f64, f64) {
        let xf = x as f64;
        ((self.psi(x) - xf).abs(), 3.0 * xf.sqrt() * xf.ln().powi(2))
    }

    fn ensure(&self, required: u64, what: &str) -> Result<()> {
        if required > self.limit {
            Err(Error::out_of_range(
                format!("sieve limit {} too small for {what}", self.limit),
                required,
            ))
        } else {
            Ok(())
        }
    }
}

/// Sieve of Eratosthenes producing `Λ` and primality for `1..=limit`.
pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    if limit < 2 {
        return Err(Error::invalid(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::out_of_range("sieve limit above supported maximum", limit));
    }
    let len = limit as usize + 1;
    let mut is_prime = vec![true; len];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut p = 2usize;
    while p * p < len {
        if is_prime[p] {
            let mut m = p * p;
            while m < len {
                is_prime[m] = false;
                m += p;
            }
        }
        p += 1;
    }

    let mut lambda = vec![0.0f64; len];
    let mut primes = Vec::new();
    let mut prime_powers = Vec::new();
    for p in 2..len {
        if !is_prime[p] {
            continue;
        }
        primes.push(p as u64);
        let log_p = (p as f64).ln();
        let mut pk = p as u64;
        while pk <= limit {
            lambda[pk as usize] = log_p;
            prime_powers.push(pk);
            match pk.checked_mul(p as u64) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    prime_powers.sort_unstable();

    Ok(SieveTable {
        limit,
        lambda,
        is_prime,
        primes,
        prime_powers,
    })
}

/// The additive problems whose representation functions are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    /// `R_G(n) = Σ_{m₁+m₂=n} Λ(m₁)Λ(m₂)`.
    Goldbach,
    /// `R_HL(n) = Σ_{m₁+m₂²=n} Λ(m₁)`, `m₂ ≥ 1`.
    HardyLittlewood,
    /// `r(n) = Σ_{p₁+p₂²+p₃²=n} log p₁ log p₂ log p₃`.
    Hua,
    /// `r″₁,₂(n) = Σ_{p₁+p₂²=n} log p₁ log p₂`.
    PrimePrimeSquare,
    /// `r″₂,₂(n) = Σ_{p₁²+p₂²=n} log p₁ log p₂`.
    TwoPrimeSquares,
    /// `r′₂,₂(n) = Σ_{p²+m²=n} log p`, `m ≥ 1`.
    PrimeSquareSquare,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::Goldbach,
        ProblemKind::HardyLittlewood,
        ProblemKind::Hua,
        ProblemKind::PrimePrimeSquare,
        ProblemKind::TwoPrimeSquares,
        ProblemKind::PrimeSquareSquare,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ProblemKind::Goldbach => "GOLDBACH",
            ProblemKind::HardyLittlewood => "HL",
            ProblemKind::Hua => "HUA",
            ProblemKind::PrimePrimeSquare => "P1P2SQ",
            ProblemKind::TwoPrimeSquares => "TWO_PSQ",
            ProblemKind::PrimeSquareSquare => "PSQ_SQ",
        }
    }

    /// Sieve limit needed to count representations of every `n ≤ max_n`.
    pub fn required_limit(self, max_n: u64) -> u64 {
        match self {
            ProblemKind::TwoPrimeSquares | ProblemKind::PrimeSquareSquare => isqrt(max_n).max(2),
            _ => max_n.max(2),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown problem kind {s:?}")))
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sub-slice of the sorted `values` lying in `[lo, hi]`.
fn window(values: &[u64], lo: u64, hi: u64) -> &[u64] {
    let start = values.partition_point(|&v| v < lo);
    let end = values.partition_point(|&v| v <= hi);
    &values[start..end.max(start)]
}

/// `Σ_{lo ≤ n ≤ hi} weight(n) · count(kind, n)`, enumerating summand tuples
/// with the first summand outermost, ascending.
fn weighted_total(
    kind: ProblemKind,
    lo: u64,
    hi: u64,
    sieve: &SieveTable,
    weight: impl Fn(u64) -> f64,
) -> Result<f64> {
    sieve.ensure(kind.required_limit(hi), kind.tag())?;
    let lo = lo.max(1);
    if hi < lo {
        return Ok(0.0);
    }
    let width = (hi - lo + 1) as usize;
    let weights: Vec<f64> = (lo..=hi).map(&weight).collect();
    let w = |n: u64| weights[(n - lo) as usize];
    debug_assert_eq!(weights.len(), width);

    let mut acc = CompensatedSum::new();
    match kind {
        ProblemKind::Goldbach => {
            let pp = sieve.prime_powers();
            for &m1 in window(pp, 1, hi - 1) {
                let l1 = sieve.lambda(m1);
                for &m2 in window(pp, lo.saturating_sub(m1).max(1), hi - m1) {
                    acc.add(l1 * sieve.lambda(m2) * w(m1 + m2));
                }
            }
        }
        ProblemKind::HardyLittlewood => {
            let pp = sieve.prime_powers();
            let mut m = 1u64;
            while m * m < hi {
                let sq = m * m;
                for &m1 in window(pp, lo.saturating_sub(sq).max(1), hi - sq) {
                    acc.add(sieve.lambda(m1) * w(m1 + sq));
                }
                m += 1;
            }
        }
        ProblemKind::Hua => {
            let primes = sieve.primes();
            for &p2 in primes.iter().take_while(|&&p| p * p + 4 + 2 <= hi) {
                let l2 = sieve.lambda(p2);
                for &p3 in primes
                    .iter()
                    .take_while(|&&p| p2 * p2 + p * p + 2 <= hi)
                {
                    let s = p2 * p2 + p3 * p3;
                    let l23 = l2 * sieve.lambda(p3);
                    for &p1 in window(primes, lo.saturating_sub(s), hi - s) {
                        acc.add(sieve.lambda(p1) * l23 * w(p1 + s));
                    }
                }
            }
        }
        ProblemKind::PrimePrimeSquare => {
            let primes = sieve.primes();
            for &p2 in primes.iter().take_while(|&&p| p * p + 2 <= hi) {
                let sq = p2 * p2;
                let l2 = sieve.lambda(p2);
                for &p1 in window(primes, lo.saturating_sub(sq), hi - sq) {
                    acc.add(sieve.lambda(p1) * l2 * w(p1 + sq));
                }
            }
        }
        ProblemKind::TwoPrimeSquares => {
            let primes = sieve.primes();
            for &p1 in primes.iter().take_while(|&&p| p * p + 4 <= hi) {
                let sq = p1 * p1;
                let l1 = sieve.lambda(p1);
                let min_p2 = isqrt(lo.saturating_sub(sq).saturating_sub(1)) + 1;
                let max_p2 = isqrt(hi - sq);
                for &p2 in window(primes, min_p2, max_p2) {
                    acc.add(l1 * sieve.lambda(p2) * w(sq + p2 * p2));
                }
            }
        }
        ProblemKind::PrimeSquareSquare => {
            let primes = sieve.primes();
            for &p in primes.iter().take_while(|&&p| p * p + 1 <= hi) {
                let sq = p * p;
                let lp = sieve.lambda(p);
                let min_m = (isqrt(lo.saturating_sub(sq).saturating_sub(1)) + 1).max(1);
                let max_m = isqrt(hi - sq);
                for m in min_m..=max_m {
                    acc.add(lp * w(sq + m * m));
                }
            }
        }
    }
    Ok(acc.value())
}

/// Weighted number of ordered representations of `n`.
pub fn representation_count(kind: ProblemKind, n: u64, sieve: &SieveTable) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    weighted_total(kind, n, n, sieve, |_| 1.0)
}

/// `Σ_{n ≤ N} count(kind, n)`, with `n = N` included.
pub fn cumulative_sum(kind: ProblemKind, n: u64, sieve: &SieveTable) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    weighted_total(kind, 1, n, sieve, |_| 1.0)
}

fn interval_end(n: u64, h: u64) -> Result<u64> {
    if h == 0 {
        return Err(Error::invalid("interval length H must be positive"));
    }
    n.checked_add(h)
        .ok_or_else(|| Error::out_of_range("N + H overflows", u64::MAX))
}

/// `Σ_{n=N+1}^{N+H} count(kind, n)`.
pub fn short_interval_sum(kind: ProblemKind, n: u64, h: u64, sieve: &SieveTable) -> Result<f64> {
    let end = interval_end(n, h)?;
    weighted_total(kind, n + 1, end, sieve, |_| 1.0)
}

/// Cesàro weight `(1 − n/N)^k / Γ(k + 1)`.
pub fn cesaro_weight(n: u64, big_n: u64, k: f64, gamma_k1: f64) -> f64 {
    let x = 1.0 - n as f64 / big_n as f64;
    if x <= 0.0 {
        0.0
    } else {
        x.powf(k) / gamma_k1
    }
}

/// `Σ_{n ≤ N} count(kind, n) (1 − n/N)^k / Γ(k + 1)`.
pub fn cesaro_sum(kind: ProblemKind, n: u64, k: f64, sieve: &SieveTable) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("Cesàro order k must be positive, got {k}")));
    }
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let gamma_k1 = log_gamma(Complex64::new(k + 1.0, 0.0))?.re.exp();
    weighted_total(kind, 1, n, sieve, |m| cesaro_weight(m, n, k, gamma_k1))
}

/// `Σ_{n=N+1}^{N+H} e^{−n/N} R_G(n)`.
pub fn exp_weighted_short_sum(n: u64, h: u64, sieve: &SieveTable) -> Result<f64> {
    let end = interval_end(n, h)?;
    let nf = n as f64;
    weighted_total(ProblemKind::Goldbach, n + 1, end, sieve, |m| (-(m as f64) / nf).exp())
}
