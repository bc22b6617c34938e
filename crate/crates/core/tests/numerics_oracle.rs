//! Exact rational arithmetic against the log-space kernels.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use num_complex::Complex64;
use paircat_core::numerics::{ln_bessel_i, ln_pair_series};
use paircat_core::{bessel_i, log_factorial, pair_amplitude};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `ln x` for a positive big integer, keeping the top 60 bits.
fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

#[test]
fn log_factorial_matches_big_integers() {
    for n in 0..=200u64 {
        let exact = if n < 2 { 0.0 } else { ln_bigint(&factorial(n)) };
        let got = log_factorial(n as usize);
        let tol = 1e-13 * exact.abs().max(1.0);
        assert!((got - exact).abs() <= tol, "n = {n}: {got} vs {exact}");
    }
}

#[test]
fn thirty_to_the_hundred_over_hundred_factorial() {
    let exact = BigRational::new(BigInt::from(30).pow(100), factorial(100));
    let ln_exact = ln_rational(&exact);
    let amp = pair_amplitude(Complex64::new(30.0, 0.0), 0, 100);
    // |30^100 / sqrt(100! 100!)| = 30^100 / 100!
    assert!((amp.log_magnitude - ln_exact).abs() < 1e-12 * ln_exact.abs().max(1.0));
    assert!((ln_exact + 23.619_637_389_347_95).abs() < 1e-11);
}

/// `I_q(x) = sum_k (x/2)^{2k+q} / (k! (k+q)!)` for rational `x/2`.
fn bessel_rational(q: u64, half_x: BigRational, terms: u64) -> BigRational {
    let mut sum = BigRational::zero();
    for k in 0..terms {
        let num = half_x.pow((2 * k + q) as i32);
        let den = BigRational::from_integer(factorial(k) * factorial(k + q));
        sum += num / den;
    }
    sum
}

#[test]
fn modified_bessel_series_agrees_with_exact_sums() {
    let cases = [(0u64, 2i64), (2, 5), (5, 1), (1, 10)];
    for (q, half) in cases {
        let exact = bessel_rational(q, BigRational::from_integer(half.into()), 120);
        let x = 2.0 * half as f64;
        let want = ln_rational(&exact);
        let got = ln_bessel_i(q as usize, x).unwrap();
        assert!(
            (got - want).abs() < 1e-13 * want.abs().max(1.0),
            "I_{q}({x})"
        );
    }
    let i0_4 = bessel_rational(0, BigRational::from_integer(2.into()), 80)
        .to_f64()
        .unwrap();
    assert!((bessel_i(0, 4.0).unwrap() - i0_4).abs() < 1e-13 * i0_4);
}

#[test]
fn pair_series_is_bessel_scaled() {
    // sum_n x^{2n} / (n! (n+q)!) with x = 3
    for q in [0u64, 1, 4] {
        let mut sum = BigRational::zero();
        for n in 0..150u64 {
            sum += BigRational::new(
                BigInt::from(9).pow(n as u32),
                factorial(n) * factorial(n + q),
            );
        }
        let want = ln_rational(&sum);
        let got = ln_pair_series(3.0, q as usize);
        assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "q = {q}");
    }
}

#[test]
fn pair_amplitude_term_by_term() {
    // xi = 2, q = 1: |2^n / sqrt(n! (n+1)!)|^2 = 4^n / (n! (n+1)!)
    for n in 0..=60u64 {
        let exact = BigRational::new(
            BigInt::from(4).pow(n as u32),
            factorial(n) * factorial(n + 1),
        );
        let want = 0.5 * ln_rational(&exact);
        let got = pair_amplitude(Complex64::new(2.0, 0.0), 1, n as usize);
        assert!(
            (got.log_magnitude - want).abs() < 1e-13 * want.abs().max(1.0),
            "n = {n}"
        );
        assert_eq!(got.phase, 0.0);
    }
}
