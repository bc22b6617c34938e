//! Teleportation through a pair cat resource by a joint measurement of the
//! photon-number sum and phase difference.
//!
//! Alice holds mode `a` of the resource `sum_n f_n |n+q>_a |n>_b` and the
//! target `sum_k d_k |k>_T`. Measuring `N_a + N_T = N` leaves Bob's mode in
//! the window `|0> .. |N'>`, `N' = N - q`; after the phase-difference
//! measurement and Bob's relabeling `|n> -> |N'-n>` plus phase shift, his
//! amplitude on `|N'-n>` is proportional to `d_{N'-n} f_n`.
//!
//! All sums over outcomes and ladder indices run low to high in a fixed
//! order so results do not depend on how callers parallelize.

use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::numerics::{log_factorial, log_space_sum, pair_amplitude, LogAmplitude, NeumaierSum};
use crate::states::{
    ln_normalization_nphi, ln_normalization_nq, pair_cat_coeffs, parity_factor, PairCatParams,
    SchmidtVector, MAX_TAIL_MASS,
};

/// Default Fock truncation of the target state.
pub const DEFAULT_K_MAX: usize = 64;

/// Largest probability the finite outcome range may miss.
pub const MAX_OUTCOME_LEAK: f64 = 1e-10;

/// Normalized Fock amplitudes `d_k`, `k = 0..=k_max`, of the state Alice sends.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    amps: Vec<Complex64>,
}

impl TargetState {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter(
                "target needs at least one amplitude".into(),
            ));
        }
        let norm_sqr = amps
            .iter()
            .map(|d| d.norm_sqr())
            .collect::<NeumaierSum>()
            .value();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    /// Number state `|k0>`.
    pub fn fock(k0: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); k0 + 1];
        amps[k0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Coherent state `|alpha>` truncated at `k_max` and renormalized.
    pub fn coherent(alpha: Complex64, k_max: usize) -> Result<Self> {
        let r = alpha.norm();
        if !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite, got {alpha}"
            )));
        }
        let ln_r2 = 2.0 * r.ln();
        let ln_weight = |k: usize| -> f64 {
            if k == 0 {
                -r * r
            } else {
                -r * r + k as f64 * ln_r2 - log_factorial(k)
            }
        };
        // Poisson tail beyond k_max
        let mut tail = NeumaierSum::new();
        for k in k_max + 1.. {
            let w = ln_weight(k).exp();
            tail.add(w);
            if (k as f64) > r * r && (w <= 1e-18 * tail.value() || w == 0.0) {
                break;
            }
        }
        let tail = tail.value();
        if tail > MAX_TAIL_MASS {
            return Err(Error::TruncationTooSmall {
                tail,
                n_max: k_max,
                limit: MAX_TAIL_MASS,
            });
        }
        let mut amps: Vec<Complex64> = (0..=k_max)
            .map(|k| {
                if k > 0 && r == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                LogAmplitude::new(0.5 * ln_weight(k), k as f64 * alpha.arg()).to_complex()
            })
            .collect();
        let norm = amps
            .iter()
            .map(|d| d.norm_sqr())
            .collect::<NeumaierSum>()
            .value()
            .sqrt();
        for d in &mut amps {
            *d /= norm;
        }
        Ok(Self { amps })
    }

    pub fn k_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `d_k`, zero beyond the truncation.
    pub fn amp(&self, k: usize) -> Complex64 {
        self.amps.get(k).copied().unwrap_or_default()
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.amp(k).norm_sqr()
    }
}

/// Coherent target with real or complex amplitude.
pub fn coherent_target(alpha: Complex64, k_max: usize) -> Result<TargetState> {
    TargetState::coherent(alpha, k_max)
}

/// Result of Alice's joint measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub n_sum: usize,
    pub theta_minus: f64,
}

impl MeasurementOutcome {
    pub fn new(n_sum: usize, theta_minus: f64) -> Self {
        Self { n_sum, theta_minus }
    }

    /// Outcome `r` of the phase-difference measurement on the `N = n_sum` shell.
    pub fn from_phase_index(n_sum: usize, r: usize, vartheta: f64) -> Result<Self> {
        Ok(Self::new(n_sum, phase_angle(n_sum, r, vartheta)?))
    }
}

/// `theta_r^N = vartheta + 2 pi r / (N + 1)`.
pub fn phase_angle(n_sum: usize, r: usize, vartheta: f64) -> Result<f64> {
    if r > n_sum {
        return Err(Error::InvalidParameter(format!(
            "phase index r = {r} must be within 0..={n_sum}"
        )));
    }
    Ok(vartheta + TAU * r as f64 / (n_sum + 1) as f64)
}

/// Coefficients of the phase-difference eigenstate
/// `|theta_r^N> = (N+1)^{-1/2} sum_n e^{i n theta} |n>_1 |N-n>_2`.
pub fn phase_eigenstate(n_sum: usize, r: usize, vartheta: f64) -> Result<Vec<Complex64>> {
    let theta = phase_angle(n_sum, r, vartheta)?;
    let amp = 1.0 / ((n_sum + 1) as f64).sqrt();
    Ok((0..=n_sum)
        .map(|n| Complex64::from_polar(amp, n as f64 * theta))
        .collect())
}

/// Bob's amplification `|n> -> |N'-n>` followed by `exp(-i N_b theta_minus)`.
///
/// `state[n]` is the amplitude on `|n>_b`, `n = 0..=N'`.
pub fn apply_bob_correction(state: &[Complex64], theta_minus: f64) -> Vec<Complex64> {
    let n_prime = state.len().saturating_sub(1);
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (n, &amp) in state.iter().enumerate() {
        let k = n_prime - n;
        out[k] = amp * Complex64::from_polar(1.0, -(k as f64) * theta_minus);
    }
    out
}

/// Resource and target of one teleportation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Teleportation {
    resource: SchmidtVector,
    target: TargetState,
}

impl Teleportation {
    pub fn new(params: &PairCatParams, target: TargetState) -> Result<Self> {
        Ok(Self::from_resource(pair_cat_coeffs(params)?, target))
    }

    /// Any ladder state can serve as the resource.
    pub fn from_resource(resource: SchmidtVector, target: TargetState) -> Self {
        Self { resource, target }
    }

    pub fn resource(&self) -> &SchmidtVector {
        &self.resource
    }

    pub fn target(&self) -> &TargetState {
        &self.target
    }

    /// Every number-sum outcome with possibly nonzero probability.
    pub fn outcomes(&self) -> RangeInclusive<usize> {
        let q = self.resource.q();
        q..=q + self.resource.n_max() + self.target.k_max()
    }

    /// Ladder indices `n` contributing to the window `N'`.
    fn window(&self, n_prime: usize) -> RangeInclusive<usize> {
        let lo = n_prime.saturating_sub(self.target.k_max());
        let hi = n_prime.min(self.resource.n_max());
        lo..=hi
    }

    fn n_prime(&self, n_sum: usize) -> Option<usize> {
        n_sum.checked_sub(self.resource.q())
    }

    /// `P(N) = sum_n |d_{N'-n}|^2 |f_n|^2`.
    pub fn probability(&self, n_sum: usize) -> f64 {
        let Some(np) = self.n_prime(n_sum) else {
            return 0.0;
        };
        let f = self.resource.coeffs();
        self.window(np)
            .map(|n| self.target.weight(np - n) * f[n].norm_sqr())
            .collect::<NeumaierSum>()
            .value()
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes()
            .map(|n| self.probability(n))
            .collect::<NeumaierSum>()
            .value()
    }

    fn nonzero_probability(&self, n_sum: usize) -> Result<(usize, f64)> {
        let p = self.probability(n_sum);
        match self.n_prime(n_sum) {
            Some(np) if p > 0.0 => Ok((np, p)),
            _ => Err(Error::ZeroProbabilityOutcome { n_sum }),
        }
    }

    /// Bob's state right after Alice's phase-difference result, on `|n>_b`.
    pub fn bob_state_after_phase_measurement(
        &self,
        outcome: &MeasurementOutcome,
    ) -> Result<Vec<Complex64>> {
        let (np, p) = self.nonzero_probability(outcome.n_sum)?;
        let norm = 1.0 / p.sqrt();
        let f = self.resource.coeffs();
        Ok((0..=np)
            .map(|n| {
                if n > self.resource.n_max() {
                    return Complex64::new(0.0, 0.0);
                }
                self.target.amp(np - n)
                    * f[n]
                    * Complex64::from_polar(norm, -(n as f64) * outcome.theta_minus)
            })
            .collect())
    }

    /// Bob's final state on `|0> .. |N'>` once the protocol completes.
    ///
    /// The correction leaves a global phase `exp(-i N' theta_minus)`, which
    /// is removed, so the result does not depend on `theta_minus`.
    pub fn conditional_bob_state(&self, outcome: &MeasurementOutcome) -> Result<Vec<Complex64>> {
        let measured = self.bob_state_after_phase_measurement(outcome)?;
        let np = measured.len() - 1;
        let global = Complex64::from_polar(1.0, np as f64 * outcome.theta_minus);
        Ok(apply_bob_correction(&measured, outcome.theta_minus)
            .into_iter()
            .map(|z| z * global)
            .collect())
    }

    /// `sum_n |d_{N'-n}|^2 f_n`, the unnormalized overlap numerator.
    fn overlap_numerator(&self, np: usize) -> Complex64 {
        let f = self.resource.coeffs();
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for n in self.window(np) {
            let z = f[n] * self.target.weight(np - n);
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Fidelity of the outcome `N` with a pure resource.
    pub fn fidelity(&self, n_sum: usize) -> Result<f64> {
        let (np, p) = self.nonzero_probability(n_sum)?;
        Ok(self.overlap_numerator(np).norm_sqr() / p)
    }

    fn check_outcome_leak(&self) -> Result<()> {
        let leak = (1.0 - self.total_probability()).abs();
        if leak > MAX_OUTCOME_LEAK {
            return Err(Error::TruncationTooSmall {
                tail: leak,
                n_max: self.resource.n_max(),
                limit: MAX_OUTCOME_LEAK,
            });
        }
        Ok(())
    }

    /// `F = sum_N P(N) F(N)`.
    pub fn average_fidelity(&self) -> Result<f64> {
        self.check_outcome_leak()?;
        let q = self.resource.q();
        Ok(self
            .outcomes()
            .map(|n| self.overlap_numerator(n - q).norm_sqr())
            .collect::<NeumaierSum>()
            .value())
    }

    /// Bob's mixed state for a dephased resource, on `|0> .. |N'>`.
    pub fn bob_state_damped(&self, gamma_t: f64, n_sum: usize) -> Result<HermitianMatrix> {
        let kernel = damping_kernel(gamma_t, self.resource.n_max() + 1)?;
        let (np, p) = self.nonzero_probability(n_sum)?;
        let f = self.resource.coeffs();
        let amp = |k: usize| -> Complex64 {
            let n = np - k;
            if n > self.resource.n_max() {
                Complex64::new(0.0, 0.0)
            } else {
                self.target.amp(k) * f[n]
            }
        };
        Ok(HermitianMatrix::from_upper(np + 1, |k, l| {
            let gap = l - k;
            if gap >= kernel.len() {
                return Complex64::new(0.0, 0.0);
            }
            amp(k) * amp(l).conj() * (kernel[gap] / p)
        }))
    }

    /// `sum_{n,m} w_n w_m^* exp(-gamma_t (n-m)^2)` with `w_n = |d_{N'-n}|^2 f_n`.
    fn damped_numerator(&self, np: usize, kernel: &[f64]) -> f64 {
        let f = self.resource.coeffs();
        let window = self.window(np);
        let w: Vec<Complex64> = window
            .clone()
            .map(|n| f[n] * self.target.weight(np - n))
            .collect();
        hermitian_form(&w, kernel)
    }

    /// Fidelity of the outcome `N` with a resource dephased by `gamma_t`.
    pub fn fidelity_damped(&self, gamma_t: f64, n_sum: usize) -> Result<f64> {
        let kernel = damping_kernel(gamma_t, self.resource.n_max() + 1)?;
        let (np, p) = self.nonzero_probability(n_sum)?;
        Ok(self.damped_numerator(np, &kernel) / p)
    }

    pub fn average_fidelity_damped(&self, gamma_t: f64) -> Result<f64> {
        let kernel = damping_kernel(gamma_t, self.resource.n_max() + 1)?;
        self.check_outcome_leak()?;
        let q = self.resource.q();
        Ok(self
            .outcomes()
            .map(|n| self.damped_numerator(n - q, &kernel))
            .collect::<NeumaierSum>()
            .value())
    }
}

/// `exp(-gamma_t k^2)` for `k = 0..len`.
fn damping_kernel(gamma_t: f64, len: usize) -> Result<Vec<f64>> {
    if !(gamma_t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_t must be >= 0, got {gamma_t}"
        )));
    }
    Ok((0..len)
        .map(|k| {
            if k == 0 || gamma_t == 0.0 {
                1.0
            } else {
                (-gamma_t * (k * k) as f64).exp()
            }
        })
        .collect())
}

/// `sum_{n,m} w_n conj(w_m) kernel[|n-m|]`.
fn hermitian_form(w: &[Complex64], kernel: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for (n, wn) in w.iter().enumerate() {
        acc.add(wn.norm_sqr());
        let mut cross = Complex64::new(0.0, 0.0);
        for (gap, wm) in w[n + 1..].iter().enumerate() {
            let g = kernel.get(gap + 1).copied().unwrap_or(0.0);
            if g == 0.0 {
                break;
            }
            cross += wm.conj() * g;
        }
        acc.add(2.0 * (wn * cross).re);
    }
    acc.value()
}

pub fn outcome_probability(
    params: &PairCatParams,
    target: &TargetState,
    n_sum: usize,
) -> Result<f64> {
    Ok(Teleportation::new(params, target.clone())?.probability(n_sum))
}

pub fn conditional_bob_state_pure(
    params: &PairCatParams,
    target: &TargetState,
    outcome: &MeasurementOutcome,
) -> Result<Vec<Complex64>> {
    Teleportation::new(params, target.clone())?.conditional_bob_state(outcome)
}

pub fn fidelity_given_n(params: &PairCatParams, target: &TargetState, n_sum: usize) -> Result<f64> {
    Teleportation::new(params, target.clone())?.fidelity(n_sum)
}

pub fn average_fidelity(params: &PairCatParams, target: &TargetState) -> Result<f64> {
    Teleportation::new(params, target.clone())?.average_fidelity()
}

pub fn bob_state_damped(
    params: &PairCatParams,
    target: &TargetState,
    gamma_t: f64,
    n_sum: usize,
) -> Result<HermitianMatrix> {
    Teleportation::new(params, target.clone())?.bob_state_damped(gamma_t, n_sum)
}

pub fn fidelity_given_n_damped(
    params: &PairCatParams,
    target: &TargetState,
    gamma_t: f64,
    n_sum: usize,
) -> Result<f64> {
    Teleportation::new(params, target.clone())?.fidelity_damped(gamma_t, n_sum)
}

pub fn average_fidelity_damped(
    params: &PairCatParams,
    target: &TargetState,
    gamma_t: f64,
) -> Result<f64> {
    Teleportation::new(params, target.clone())?.average_fidelity_damped(gamma_t)
}

/// `|alpha|^{2(N-n)} / (N-n)! * xi^n [1 + (-1)^n e^{i phi}] / sqrt(n! (n+q)!)`
/// for `n = 0..=N`. The combined power of `|alpha|` is never split into
/// `|alpha|^{4N} |alpha|^{-2n}`.
fn coherent_shell_terms(
    params: &PairCatParams,
    ln_alpha: f64,
    n_total: usize,
) -> Vec<LogAmplitude> {
    (0..=n_total)
        .map(|n| {
            let k = n_total - n;
            let ln_alpha_pow = if k == 0 {
                0.0
            } else {
                2.0 * k as f64 * ln_alpha
            };
            (pair_amplitude(params.xi, params.q, n) * parity_factor(n, params.phi))
                .scale(ln_alpha_pow - log_factorial(k))
        })
        .collect()
}

/// Sums per-shell contributions until two consecutive shells past the bulk of
/// both distributions are negligible.
fn sum_shells<F: FnMut(usize) -> f64>(params: &PairCatParams, alpha: f64, mut shell: F) -> f64 {
    let bulk = params.xi.norm() + alpha * alpha;
    let n_min = (bulk + 10.0 * bulk.sqrt()) as usize + 20;
    let mut acc = NeumaierSum::new();
    let mut quiet = 0;
    for n in 0..100_000 {
        let term = shell(n);
        acc.add(term);
        if n >= n_min && term <= 1e-20 * acc.value() {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    acc.value()
}

/// Average fidelity for a coherent target from the untruncated series with
/// analytic normalization constants.
pub fn coherent_average_fidelity_closed_form(params: &PairCatParams, alpha: f64) -> Result<f64> {
    let r = alpha.abs();
    let ln_pref = 2.0 * ln_normalization_nq(params.xi, params.q)
        + 2.0 * ln_normalization_nphi(params)?
        - 2.0 * r * r;
    let ln_alpha = r.ln();
    Ok(sum_shells(params, r, |n| {
        let s = log_space_sum(coherent_shell_terms(params, ln_alpha, n));
        if s.is_zero() {
            0.0
        } else {
            (ln_pref + s.ln_norm_sqr()).exp()
        }
    }))
}

/// Damped counterpart of [`coherent_average_fidelity_closed_form`].
pub fn coherent_average_fidelity_damped_closed_form(
    params: &PairCatParams,
    alpha: f64,
    gamma_t: f64,
) -> Result<f64> {
    let r = alpha.abs();
    let ln_pref = 2.0 * ln_normalization_nq(params.xi, params.q)
        + 2.0 * ln_normalization_nphi(params)?
        - 2.0 * r * r;
    let ln_alpha = r.ln();
    let mut kernel = damping_kernel(gamma_t, 1)?;
    Ok(sum_shells(params, r, |n| {
        let terms = coherent_shell_terms(params, ln_alpha, n);
        let max = terms
            .iter()
            .map(|t| t.log_magnitude)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return 0.0;
        }
        if kernel.len() < terms.len() {
            kernel = damping_kernel(gamma_t, terms.len()).expect("validated above");
        }
        let scaled: Vec<Complex64> = terms.iter().map(|t| t.scale(-max).to_complex()).collect();
        let form = hermitian_form(&scaled, &kernel);
        if form <= 0.0 {
            0.0
        } else {
            (ln_pref + 2.0 * max + form.ln()).exp()
        }
    }))
}
