//! Two-mode phase damping acting on maximally correlated ladder states.
//!
//! A state supported on `|n+q, n>` stays on that ladder under dephasing, and
//! both modes see the same occupation gap `n - m` between ladder rungs, so
//! the channel multiplies `c_{n,m}` by `exp[-(g1 + g2) t (n - m)^2 / 2]`.
//! Everything here therefore works on the `(n_max+1)^2` ladder coefficient
//! matrix, never on the full two-mode density matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::states::SchmidtVector;

/// Largest truncation the integration oracle accepts.
pub const ORACLE_MAX_N: usize = 16;

/// Dephasing rates of the two modes and the elapsed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSchedule {
    gamma1: f64,
    gamma2: f64,
    t: f64,
}

impl DampingSchedule {
    pub fn new(gamma1: f64, gamma2: f64, t: f64) -> Result<Self> {
        for (name, v) in [("gamma1", gamma1), ("gamma2", gamma2), ("t", t)] {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        Ok(Self { gamma1, gamma2, t })
    }

    /// Equal rates with degree of damping `d = gamma t` (gamma = 1, t = d).
    pub fn from_degree(d: f64) -> Result<Self> {
        Self::new(1.0, 1.0, d)
    }

    pub fn none() -> Self {
        Self {
            gamma1: 0.0,
            gamma2: 0.0,
            t: 0.0,
        }
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn rate_time(rate: f64, t: f64) -> f64 {
        if rate == 0.0 || t == 0.0 {
            0.0
        } else {
            rate * t
        }
    }

    /// `gamma1 t`, with `0 * inf = 0`.
    pub fn gamma1_t(&self) -> f64 {
        Self::rate_time(self.gamma1, self.t)
    }

    /// `gamma2 t`, with `0 * inf = 0`.
    pub fn gamma2_t(&self) -> f64 {
        Self::rate_time(self.gamma2, self.t)
    }

    /// The combined dimensionless damping `(gamma1 + gamma2) t / 2`; equals
    /// `d` for equal rates.
    pub fn degree(&self) -> f64 {
        0.5 * (self.gamma1_t() + self.gamma2_t())
    }

    /// Natural log of the coherence factor between rungs whose mode-1 and
    /// mode-2 occupations differ by `gap1` and `gap2`.
    pub fn ln_decoherence(&self, gap1: i64, gap2: i64) -> f64 {
        let term = |rt: f64, gap: i64| {
            if gap == 0 {
                0.0
            } else {
                -0.5 * rt * (gap * gap) as f64
            }
        };
        term(self.gamma1_t(), gap1) + term(self.gamma2_t(), gap2)
    }

    /// Coherence factor `D(k)` between ladder rungs `k` apart.
    pub fn ladder_decoherence(&self, gap: usize) -> f64 {
        let g = gap as i64;
        self.ln_decoherence(g, g).exp()
    }
}

/// Hermitian, unit-trace coefficient matrix of a maximally correlated state
/// `sum c_{n,m} |n+q, n><m+q, m|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedMatrix {
    q: usize,
    matrix: HermitianMatrix,
}

impl CorrelatedMatrix {
    /// Wraps a coefficient matrix after checking unit trace (within 1e-10).
    pub fn new(q: usize, matrix: HermitianMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::InvalidParameter(
                "ladder matrix needs n_max >= 1".into(),
            ));
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitTrace { trace });
        }
        Ok(Self { q, matrix })
    }

    /// Pure-state projector `|psi><psi|`.
    pub fn projector(v: &SchmidtVector) -> Self {
        Self {
            q: v.q(),
            matrix: HermitianMatrix::outer(v.coeffs()),
        }
    }

    pub fn from_populations(q: usize, populations: &[f64]) -> Result<Self> {
        Self::new(q, HermitianMatrix::from_diagonal(populations))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n_max(&self) -> usize {
        self.matrix.dim() - 1
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.matrix.get(n, m)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Exact phase-damped evolution of the pure ladder state `v`.
pub fn evolve(v: &SchmidtVector, sched: &DampingSchedule) -> CorrelatedMatrix {
    let f = v.coeffs();
    let dim = f.len();
    let factors: Vec<f64> = (0..dim).map(|k| sched.ladder_decoherence(k)).collect();
    CorrelatedMatrix {
        q: v.q(),
        matrix: HermitianMatrix::from_upper(dim, |n, m| f[n] * f[m].conj() * factors[m - n]),
    }
}

/// Integrates the phase-damping master equation by classical RK4 on the
/// ladder coefficient matrix.
///
/// The generator is built from the mode number operators, `L_i rho =
/// (g_i / 2) [2 N_i rho N_i - N_i^2 rho - rho N_i^2]`, with `N_1 = diag(n+q)`
/// and `N_2 = diag(n)` on the ladder. The run is repeated with half the step
/// and the finer result is returned if no entry moved by more than 1e-8.
pub fn liouvillian_oracle(
    v: &SchmidtVector,
    sched: &DampingSchedule,
    steps: usize,
) -> Result<CorrelatedMatrix> {
    if v.n_max() > ORACLE_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "oracle supports n_max <= {ORACLE_MAX_N}, got {}",
            v.n_max()
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    if !sched.t().is_finite() {
        return Err(Error::InvalidParameter("oracle needs a finite time".into()));
    }
    let dim = v.n_max() + 1;
    let f = nalgebra::DVector::from_column_slice(v.coeffs());
    let rho0 = &f * f.adjoint();

    let n1 = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new((r + v.q()) as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let n2 = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(r as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let generator = |rho: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(dim, dim);
        for (gamma, n) in [(sched.gamma1(), &n1), (sched.gamma2(), &n2)] {
            if gamma == 0.0 {
                continue;
            }
            let n_sq = n * n;
            let term = (n * rho * n) * Complex64::new(2.0, 0.0) - &n_sq * rho - rho * &n_sq;
            out += term * Complex64::new(0.5 * gamma, 0.0);
        }
        out
    };

    let integrate = |steps: usize| -> DMatrix<Complex64> {
        let h = Complex64::new(sched.t() / steps as f64, 0.0);
        let half = h * 0.5;
        let mut rho = rho0.clone();
        for _ in 0..steps {
            let k1 = generator(&rho);
            let k2 = generator(&(&rho + &k1 * half));
            let k3 = generator(&(&rho + &k2 * half));
            let k4 = generator(&(&rho + &k3 * h));
            rho += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * (h / 6.0);
        }
        rho
    };

    let coarse = integrate(steps);
    let fine = integrate(2 * steps);
    let max_diff = coarse
        .iter()
        .zip(fine.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if max_diff > 1e-8 {
        return Err(Error::StepCheckFailed { max_diff });
    }
    let data: Vec<Complex64> = fine.transpose().iter().copied().collect();
    let matrix = HermitianMatrix::from_row_major(dim, data, 1e-10)?;
    CorrelatedMatrix::new(v.q(), matrix)
}
