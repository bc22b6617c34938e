//! Dense Hermitian matrices and a cyclic Jacobi eigensolver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;

const MAX_SWEEPS: usize = 100;

/// Square Hermitian matrix, row-major. Hermiticity holds exactly: the lower
/// triangle is always the conjugate of the upper one and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from its upper triangle; `entry(n, m)` is only called
    /// for `n <= m`.
    pub fn from_upper<F>(dim: usize, mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for n in 0..dim {
            data[n * dim + n] = Complex64::new(entry(n, n).re, 0.0);
            for m in n + 1..dim {
                let z = entry(n, m);
                data[n * dim + m] = z;
                data[m * dim + n] = z.conj();
            }
        }
        Self { dim, data }
    }

    /// Accepts a row-major matrix that is Hermitian within `tol` and
    /// symmetrizes it exactly.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>, tol: f64) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let mut defect: f64 = 0.0;
        for n in 0..dim {
            for m in n..dim {
                defect = defect.max((data[n * dim + m] - data[m * dim + n].conj()).norm());
            }
        }
        if defect > tol {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self::from_upper(dim, |n, m| {
            0.5 * (data[n * dim + m] + data[m * dim + n].conj())
        }))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_upper(diag.len(), |n, m| {
            if n == m {
                Complex64::new(diag[n], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one projector `v v^dagger`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_upper(v.len(), |n, m| v[n] * v[m].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.data[n * self.dim + m]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|n| self.get(n, n).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|n| self.get(n, n).re)
            .collect::<NeumaierSum>()
            .value()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        off_norm_sqr(&self.data, self.dim).sqrt()
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `<v| A |v>` (real for Hermitian A).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut acc = NeumaierSum::new();
        for n in 0..self.dim {
            let mut row = Complex64::new(0.0, 0.0);
            for m in 0..self.dim {
                row += self.get(n, m) * v[m];
            }
            acc.add((v[n].conj() * row).re);
        }
        acc.value()
    }

    /// All eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        jacobi_eigenvalues(self.data.clone(), self.dim)
    }
}

fn off_norm_sqr(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[p * n + q].norm_sqr();
        }
    }
    s
}

/// Cyclic complex Jacobi. Each rotation `J = Phi R Phi^dagger` first removes
/// the phase of `a_pq` and then applies the real rotation that zeroes it.
fn jacobi_eigenvalues(mut a: Vec<Complex64>, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let tiny = f64::MIN_POSITIVE;
    // off-diagonal mass below this cannot move any eigenvalue by more than
    // a few ulps of the matrix norm
    let target = (f64::EPSILON * f64::EPSILON) * total * 1e-2;

    for sweep in 0..MAX_SWEEPS {
        let off = off_norm_sqr(&a, n);
        if off <= target || off <= tiny {
            let mut eig: Vec<f64> = (0..n).map(|k| a[k * n + k].re).collect();
            eig.sort_by(|x, y| y.total_cmp(x));
            return Ok(eig);
        }
        // early sweeps skip elements that are small relative to the average
        let threshold = if sweep < 3 {
            0.2 * off.sqrt() / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g <= tiny {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if sweep > 3
                    && (app.abs() + 100.0 * g == app.abs())
                    && (aqq.abs() + 100.0 * g == aqq.abs())
                {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                if g <= threshold {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + 100.0 * g == h.abs() {
                    g / h
                } else {
                    let theta = 0.5 * h / g;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e = apq / g; // e^{i arg a_pq}
                let s_e = e * s; // s e^{i theta}
                let s_ec = e.conj() * s; // s e^{-i theta}

                // A <- A J on columns p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * s_ec;
                    a[k * n + q] = akp * s_e + akq * c;
                }
                // A <- J^dagger A on rows p, q
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * s_e;
                    a[q * n + k] = apk * s_ec + aqk * c;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
    Err(Error::ConvergenceFailure {
        sweeps: MAX_SWEEPS,
        off_norm: off_norm_sqr(&a, n).sqrt(),
    })
}
