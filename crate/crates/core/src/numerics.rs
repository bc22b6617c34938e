//! Overflow-safe scalar kernels for Fock-space amplitudes.
//!
//! Pair-coherent amplitudes `xi^n / sqrt(n! (n+q)!)` overflow doubles long
//! before the series they belong to has converged (|xi| = 30 peaks near
//! n = 30 with values around e^57), so everything here works with natural-log
//! magnitudes and exponentiates only when a caller assembles final values.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative size below which a series term no longer contributes.
pub const SERIES_CUTOFF: f64 = 1e-18;

const FACTORIAL_TABLE_LEN: usize = 4096;

/// A complex number stored as `exp(log_magnitude) * exp(i * phase)`.
///
/// Exact zero is `log_magnitude == -inf`; the phase of zero is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAmplitude {
    pub log_magnitude: f64,
    pub phase: f64,
}

impl LogAmplitude {
    pub const ZERO: LogAmplitude = LogAmplitude {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogAmplitude = LogAmplitude {
        log_magnitude: 0.0,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    /// Natural log of `|z|^2`.
    pub fn ln_norm_sqr(self) -> f64 {
        2.0 * self.log_magnitude
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_magnitude, -self.phase)
    }

    /// Multiplies by the positive real `exp(ln_factor)`.
    pub fn scale(self, ln_factor: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_magnitude + ln_factor, self.phase)
    }
}

impl std::ops::Mul for LogAmplitude {
    type Output = LogAmplitude;

    fn mul(self, rhs: LogAmplitude) -> LogAmplitude {
        if self.is_zero() || rhs.is_zero() {
            return LogAmplitude::ZERO;
        }
        LogAmplitude::new(
            self.log_magnitude + rhs.log_magnitude,
            self.phase + rhs.phase,
        )
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let r = (theta + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(FACTORIAL_TABLE_LEN);
        let mut acc = NeumaierSum::new();
        table.push(0.0);
        for k in 1..FACTORIAL_TABLE_LEN {
            acc.add((k as f64).ln());
            table.push(acc.value());
        }
        table
    })
}

/// `ln(n!)`.
///
/// Tabulated by compensated cumulative summation of `ln k` below 4096,
/// Stirling series above.
pub fn log_factorial(n: usize) -> f64 {
    if n < FACTORIAL_TABLE_LEN {
        return factorial_table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (TAU * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)))
}

/// Sums `exp(terms)` for a sequence of log-terms, returning the natural log
/// of the total. Terms are rescaled by their maximum before summation.
pub fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: NeumaierSum = terms.iter().map(|&t| (t - max).exp()).collect();
    max + s.value().ln()
}

/// Log-terms `2n ln x - ln n! - ln (n+q)!` of the pair series, from n = 0
/// until past the peak and below [`SERIES_CUTOFF`] of the running sum.
pub(crate) fn pair_series_log_terms(x: f64, q: usize) -> Vec<f64> {
    if x == 0.0 {
        return vec![-log_factorial(q)];
    }
    let two_ln_x = 2.0 * x.ln();
    let ln_cutoff = SERIES_CUTOFF.ln();
    let mut terms = Vec::new();
    let mut running_max = f64::NEG_INFINITY;
    // running log-sum, refreshed lazily; an upper bound is all the stop test needs
    let mut running = f64::NEG_INFINITY;
    for n in 0.. {
        let t = n as f64 * two_ln_x - log_factorial(n) - log_factorial(n + q);
        terms.push(t);
        running_max = running_max.max(t);
        running = ln_add(running, t);
        let past_peak = x * x < ((n + 1) * (n + 1 + q)) as f64;
        if past_peak && t - running < ln_cutoff {
            break;
        }
    }
    debug_assert!(running_max.is_finite());
    terms
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln sum_n x^{2n} / (n! (n+q)!)`, i.e. `ln(x^{-q} I_q(2x))`; for x = 0 this
/// is the limit `-ln q!`.
pub fn ln_pair_series(x: f64, q: usize) -> f64 {
    ln_sum_exp(&pair_series_log_terms(x, q))
}

/// Natural log of the modified Bessel function `I_q(x)`.
pub fn ln_bessel_i(q: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_i requires finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(if q == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let half = 0.5 * x;
    Ok(q as f64 * half.ln() + ln_pair_series(half, q))
}

/// Modified Bessel function of the first kind `I_q(x)` for integer order.
pub fn bessel_i(q: usize, x: f64) -> Result<f64> {
    ln_bessel_i(q, x).map(f64::exp)
}

/// `xi^n / sqrt(n! (n+q)!)` in log-magnitude / phase form.
pub fn pair_amplitude(xi: Complex64, q: usize, n: usize) -> LogAmplitude {
    let half_ln_den = 0.5 * (log_factorial(n) + log_factorial(n + q));
    if n == 0 {
        return LogAmplitude::new(-half_ln_den, 0.0);
    }
    let r = xi.norm();
    if r == 0.0 {
        return LogAmplitude::ZERO;
    }
    LogAmplitude::new(n as f64 * r.ln() - half_ln_den, n as f64 * xi.arg())
}

/// Sum of log-space complex terms, rescaled by the largest magnitude.
pub fn log_space_sum<I>(terms: I) -> LogAmplitude
where
    I: IntoIterator<Item = LogAmplitude>,
{
    let terms: Vec<LogAmplitude> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    let max = terms
        .iter()
        .map(|t| t.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogAmplitude::ZERO;
    }
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for t in &terms {
        let z = Complex64::from_polar((t.log_magnitude - max).exp(), t.phase);
        re.add(z.re);
        im.add(z.im);
    }
    LogAmplitude::from_complex(Complex64::new(re.value(), im.value())).scale(max)
}
