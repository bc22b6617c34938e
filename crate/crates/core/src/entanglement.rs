//! Relative entropy of entanglement for maximally correlated states and the
//! reduction-criterion distillability witness.
//!
//! For `rho = sum c_{n,m} |phi_n, psi_n><phi_m, psi_m|` with orthogonal
//! families on each side, the minimizing separable state is the dephased
//! `diag(c_{n,n})` and `E_R = H(c_{n,n}) - S(rho)`.

use std::cmp::Ordering;

use crate::channel::{CorrelatedMatrix, DampingSchedule};
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::numerics::NeumaierSum;
use crate::states::{shannon_entropy_bits, SchmidtVector};

/// Eigenvalues at or above this (and below zero) are roundoff and clip to 0.
pub const EIGEN_CLIP: f64 = -1e-10;

/// Real spectrum of a Hermitian matrix, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the given eigenvalues into descending order.
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .collect::<NeumaierSum>()
            .value()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }
}

pub fn hermitian_eigenvalues(m: &CorrelatedMatrix) -> Result<Spectrum> {
    matrix_spectrum(m.matrix())
}

pub fn matrix_spectrum(m: &HermitianMatrix) -> Result<Spectrum> {
    m.eigenvalues().map(|eigenvalues| Spectrum { eigenvalues })
}

/// `-sum lambda log2 lambda` (bits). Eigenvalues in `[-1e-10, 0)` are treated
/// as zero; anything more negative is an error.
pub fn von_neumann_entropy(s: &Spectrum) -> Result<f64> {
    if let Some(&value) = s.eigenvalues.iter().find(|&&x| x < EIGEN_CLIP) {
        return Err(Error::NegativeEigenvalue { value });
    }
    Ok(shannon_entropy_bits(
        s.eigenvalues.iter().map(|&x| x.clamp(0.0, 1.0)),
    ))
}

/// `E = -sum_n c_nn log2 c_nn + Tr(rho log2 rho)`.
pub fn relative_entropy_of_entanglement(m: &CorrelatedMatrix) -> Result<f64> {
    let populations = shannon_entropy_bits(m.populations());
    let mixed = von_neumann_entropy(&hermitian_eigenvalues(m)?)?;
    let e = populations - mixed;
    Ok(if (EIGEN_CLIP..0.0).contains(&e) {
        0.0
    } else {
        e
    })
}

/// The separable state `diag(c_{n,n})` minimizing the relative entropy.
pub fn closest_separable_state(m: &CorrelatedMatrix) -> CorrelatedMatrix {
    CorrelatedMatrix::new(m.q(), HermitianMatrix::from_diagonal(&m.populations()))
        .expect("populations of a unit-trace matrix have unit sum")
}

/// Quantum relative entropy `S(rho || sigma) = -S(rho) - Tr(rho log2 sigma)`
/// for a `sigma` that is diagonal in the ladder basis.
///
/// Returns `+inf` when `rho` has population where `sigma` has none.
pub fn relative_entropy_to_diagonal(
    rho: &CorrelatedMatrix,
    sigma: &CorrelatedMatrix,
) -> Result<f64> {
    if sigma.matrix().off_diagonal_norm() != 0.0 {
        return Err(Error::InvalidParameter("sigma must be diagonal".into()));
    }
    if sigma.n_max() != rho.n_max() {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    let s_rho = von_neumann_entropy(&hermitian_eigenvalues(rho)?)?;
    let mut cross = NeumaierSum::new();
    for (p, s) in rho.populations().into_iter().zip(sigma.populations()) {
        if p <= 0.0 {
            continue;
        }
        if s <= 0.0 {
            return Ok(f64::INFINITY);
        }
        cross.add(-p * s.log2());
    }
    Ok(cross.value() - s_rho)
}

/// A real number kept as sign and natural-log magnitude so that values like
/// `-e^{-1000}` keep their sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1.
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_parts(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            sign: if sign > 0.0 { 1 } else { -1 },
            ln_abs,
        }
    }

    /// Linear value; may underflow to a signed zero.
    pub fn value(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    pub fn is_negative(self) -> bool {
        self.sign < 0
    }
}

impl std::ops::Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl PartialOrd for SignedLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_abs.partial_cmp(&other.ln_abs),
                _ => other.ln_abs.partial_cmp(&self.ln_abs),
            },
            ord => Some(ord),
        }
    }
}

/// The four witness expectation values for one coefficient pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    /// `Omega_1 .. Omega_4` in sign / log-magnitude form.
    pub omega: [SignedLog; 4],
    /// Smallest of the four.
    pub min_omega: SignedLog,
    /// Zero-based position of `min_omega` in `omega`.
    pub min_index: usize,
    pub distillable: bool,
    pub i: usize,
    pub j: usize,
    /// `ln D`, the log of the decoherence factor between rungs i and j.
    pub ln_decoherence: f64,
}

impl WitnessReport {
    pub fn omega_values(&self) -> [f64; 4] {
        self.omega.map(SignedLog::value)
    }

    /// `Omega_1 + Omega_2` and `Omega_3 + Omega_4` in linear scale.
    pub fn identity_sums(&self) -> (f64, f64) {
        let w = self.omega_values();
        (w[0] + w[1], w[2] + w[3])
    }
}

/// Evaluates `Omega_k = <W_k| Tr_D rho (x) I - rho |W_k>` for the damped
/// state of `v`, using the closed forms
/// `Omega_{1,2} = -/+ D Re(f_i f_j^*)`, `Omega_{3,4} = +/- D Im(f_i f_j^*)`.
pub fn reduction_witness(
    v: &SchmidtVector,
    sched: &DampingSchedule,
    i: usize,
    j: usize,
) -> Result<WitnessReport> {
    let f = v.coeffs();
    if i == j || i >= f.len() || j >= f.len() {
        return Err(Error::InvalidParameter(format!(
            "witness needs two distinct indices within 0..={}, got ({i}, {j})",
            v.n_max()
        )));
    }
    let (fi, fj) = (f[i], f[j]);
    if fi.norm() == 0.0 || fj.norm() == 0.0 {
        return Err(Error::ZeroCoefficient { i, j });
    }
    // both mode occupations differ by i - j along the ladder
    let gap = i as i64 - j as i64;
    let ln_d = sched.ln_decoherence(gap, gap);
    let ln_mag = ln_d + fi.norm().ln() + fj.norm().ln();
    let delta = fi.arg() - fj.arg();
    let (sin_d, cos_d) = delta.sin_cos();

    let re = SignedLog::from_parts(cos_d, ln_mag + cos_d.abs().ln());
    let im = SignedLog::from_parts(sin_d, ln_mag + sin_d.abs().ln());
    let omega = [-re, re, im, -im];

    let (min_index, min_omega) = omega
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .expect("four entries");
    Ok(WitnessReport {
        omega,
        min_omega,
        min_index,
        distillable: min_omega.is_negative(),
        i,
        j,
        ln_decoherence: ln_d,
    })
}

/// The two largest-magnitude nonzero coefficients (lower index first on ties),
/// returned in ascending index order.
pub fn default_witness_pair(v: &SchmidtVector) -> Option<(usize, usize)> {
    let mut idx: Vec<usize> = (0..v.coeffs().len())
        .filter(|&n| v.coeffs()[n].norm() > 0.0)
        .collect();
    if idx.len() < 2 {
        return None;
    }
    idx.sort_by(|&a, &b| {
        v.coeffs()[b]
            .norm()
            .total_cmp(&v.coeffs()[a].norm())
            .then(a.cmp(&b))
    });
    let (a, b) = (idx[0], idx[1]);
    Some((a.min(b), a.max(b)))
}
