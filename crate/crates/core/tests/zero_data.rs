//! Checks that need the shipped zero table.

use std::path::PathBuf;
use zerosum::explicit::goldbach_average;
use zerosum::zeros::{counting_estimate, load_zeros, ZeroTable};
use zerosum::{build_sieve, Term};

fn table() -> ZeroTable {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros.txt");
    load_zeros(path).unwrap()
}

#[test]
fn counting_matches_estimate() {
    let t = table();
    assert!(t.max_height() > 10_000.0);
    for h in [100.0, 500.0, 1000.0, 2500.0, 5000.0, 7500.0, 10_000.0] {
        let (count, est) = t.counting_check(h);
        assert!((count as f64 - est).abs() < 3.0, "T = {h}: {count} vs {est}");
    }
    assert_eq!(t.truncate(100.0).len(), 29);
    assert_eq!(t.truncate(1000.0).len(), 649);
    assert_eq!(t.truncate(10_000.0).len(), 10_142);
    assert!(counting_estimate(10_000.0) > 10_000.0);
}

#[test]
fn more_zeros_do_not_hurt() {
    let t = table();
    for n in [1000, 10_000] {
        let sieve = build_sieve(n).unwrap();
        let low = goldbach_average(n, t.truncate(100.0), &sieve).unwrap();
        let high = goldbach_average(n, t.truncate(10_000.0), &sieve).unwrap();
        let l = (n as f64).ln();
        let slack = 0.01 * n as f64 * l.powi(3);
        assert!(high.residual.abs() <= low.residual.abs() + slack, "N = {n}: {} vs {}", high.residual, low.residual);
    }
}

#[test]
fn goldbach_zero_sum_settles() {
    let t = table();
    let n = 4096;
    let sieve = build_sieve(n).unwrap();
    let zs: Vec<f64> = [100.0, 1000.0, 5000.0]
        .iter()
        .map(|&h| goldbach_average(n, t.truncate(h), &sieve).unwrap().term(Term::ZeroSum1).unwrap())
        .collect();
    assert!((zs[2] - zs[1]).abs() < (zs[1] - zs[0]).abs(), "{zs:?}");
}
