//! Reference implementations used only by tests. None of these share code
//! paths with the library: amplitudes come from plain recursions instead of
//! log-space factorials, spectra from Householder + Sturm bisection or
//! nalgebra, and states are built on full tensor-product Fock spaces.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use paircat_core::HermitianMatrix;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `xi^n / sqrt(n! (n+q)!)` for `n = 0..=n_max`, by the ratio recursion.
pub fn pair_coherent_unnormalized(xi: Complex64, q: usize, n_max: usize) -> Vec<Complex64> {
    let mut a0 = 1.0;
    for k in 1..=q {
        a0 /= (k as f64).sqrt();
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut a = c(a0, 0.0);
    for n in 0..=n_max {
        out.push(a);
        let step = (((n + 1) * (n + 1 + q)) as f64).sqrt();
        a = a * xi / step;
    }
    out
}

pub fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// `|xi,q> + e^{i phi} |-xi,q>`, normalized by its own norm on the kept range.
pub fn two_branch_cat(xi: Complex64, q: usize, phi: f64, n_max: usize) -> Vec<Complex64> {
    let plus = pair_coherent_unnormalized(xi, q, n_max);
    let minus = pair_coherent_unnormalized(-xi, q, n_max);
    let rot = Complex64::from_polar(1.0, phi);
    let mut v: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| a + rot * b).collect();
    normalize(&mut v);
    v
}

pub fn entropy_bits(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

pub fn to_dmatrix(m: &HermitianMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

pub fn nalgebra_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Householder reduction of a real symmetric matrix to tridiagonal form.
/// Returns (diagonal, subdiagonal).
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum();
        if alpha_sq == 0.0 {
            continue;
        }
        let alpha = -a[k + 1][k].signum() * alpha_sq.sqrt();
        let mut v = vec![0.0; n];
        v[k + 1] = a[k + 1][k] - alpha;
        for i in k + 2..n {
            v[i] = a[i][k];
        }
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // A <- H A H with H = I - 2 v v^T / |v|^2
        let p: Vec<f64> = (0..n)
            .map(|i| 2.0 * (0..n).map(|j| a[i][j] * v[j]).sum::<f64>() / vnorm_sq)
            .collect();
        let kappa = (0..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm_sq;
        let w: Vec<f64> = (0..n).map(|i| p[i] - kappa * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (1..n).map(|i| a[i][i - 1]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of a Hermitian matrix from its real `2n` embedding
/// `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB` doubled.
/// Returned in descending order.
pub fn sturm_eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            big[i][j] = z.re;
            big[i + n][j + n] = z.re;
            big[i][j + n] = -z.im;
            big[i + n][j] = z.im;
        }
    }
    let (d, e) = tridiagonalize(big);
    let radius = (0..d.len())
        .map(|i| {
            let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let right = if i < e.len() { e[i].abs() } else { 0.0 };
            d[i].abs() + left + right
        })
        .fold(0.0, f64::max)
        + 1.0;
    let mut ev = Vec::with_capacity(n);
    for k in 0..n {
        // the (2k+1)-th smallest of the doubled spectrum
        let target = 2 * k + 1;
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(&d, &e, mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        ev.push(0.5 * (lo + hi));
    }
    ev.reverse();
    ev
}

/// Relative entropy of entanglement evaluated on the full `(n_max+q+1) x
/// (n_max+1)` two-mode Fock space: the dephased pair cat density matrix is
/// built entry by entry with separate per-mode damping factors, and
/// `E = S(diag rho) - S(rho)` with the spectrum from nalgebra.
pub fn brute_force_ree(
    xi: Complex64,
    q: usize,
    phi: f64,
    gamma1_t: f64,
    gamma2_t: f64,
    n_max: usize,
) -> f64 {
    let ladder = two_branch_cat(xi, q, phi, n_max);
    let da = n_max + q + 1;
    let db = n_max + 1;
    let dim = da * db;
    let mut psi = vec![c(0.0, 0.0); dim];
    for (n, &f) in ladder.iter().enumerate() {
        psi[(n + q) * db + n] = f;
    }
    let rho = DMatrix::from_fn(dim, dim, |i, j| {
        let (a1, b1) = ((i / db) as f64, (i % db) as f64);
        let (a2, b2) = ((j / db) as f64, (j % db) as f64);
        let damp = (-0.5 * gamma1_t * (a1 - a2).powi(2) - 0.5 * gamma2_t * (b1 - b2).powi(2)).exp();
        psi[i] * psi[j].conj() * damp
    });
    let diag_entropy = entropy_bits((0..dim).map(|i| rho[(i, i)].re));
    let spectrum = rho.symmetric_eigen().eigenvalues;
    diag_entropy - entropy_bits(spectrum.iter().copied())
}

/// Full tripartite evaluation of the number-sum / phase-difference protocol.
///
/// `resource[n]` is the ladder amplitude on `|n+q>_a |n>_b`, `target[k]` the
/// amplitude on `|k>_T`. Alice projects modes (a, T) onto the number sum
/// `n_sum` and then onto `|theta>` with mode `a` as the first mode; Bob
/// relabels `|n> -> |N'-n>` and applies `exp(-i N_b theta)`. Returns Bob's
/// normalized state on `|0> .. |N'>`, or `None` if the outcome has zero
/// probability.
pub fn tripartite_bob_state(
    resource: &[Complex64],
    q: usize,
    target: &[Complex64],
    n_sum: usize,
    theta: f64,
) -> Option<Vec<Complex64>> {
    let da = resource.len() + q;
    let db = resource.len();
    let dt = target.len();
    let idx = |a: usize, b: usize, k: usize| (a * db + b) * dt + k;
    let mut psi = vec![c(0.0, 0.0); da * db * dt];
    for (n, &f) in resource.iter().enumerate() {
        for (k, &d) in target.iter().enumerate() {
            psi[idx(n + q, n, k)] = f * d;
        }
    }
    // number-sum projector on (a, T)
    for a in 0..da {
        for b in 0..db {
            for k in 0..dt {
                if a + k != n_sum {
                    psi[idx(a, b, k)] = c(0.0, 0.0);
                }
            }
        }
    }
    let n_prime = n_sum.checked_sub(q)?;
    // <theta| on (a, T): sum_j e^{-i j theta} <j|_a <N-j|_T / sqrt(N+1)
    let amp = 1.0 / ((n_sum + 1) as f64).sqrt();
    let mut bob = vec![c(0.0, 0.0); n_prime + 1];
    for (b, slot) in bob.iter_mut().enumerate() {
        for j in 0..=n_sum {
            let k = n_sum - j;
            if j < da && k < dt && b < db {
                *slot += Complex64::from_polar(amp, -(j as f64) * theta) * psi[idx(j, b, k)];
            }
        }
    }
    let norm_sqr: f64 = bob.iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr == 0.0 {
        return None;
    }
    normalize(&mut bob);
    let mut out = vec![c(0.0, 0.0); n_prime + 1];
    for (n, &z) in bob.iter().enumerate() {
        let k = n_prime - n;
        out[k] = z * Complex64::from_polar(1.0, -(k as f64) * theta);
    }
    Some(out)
}

/// `min over global phase of max_k |a_k - e^{i chi} b_k|`, with the phase
/// taken from the largest overlap.
pub fn distance_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let rot = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - rot * y).norm())
        .fold(0.0, f64::max)
}

/// Entry `<a1, b1| rho |a2, b2>` of the dephased two-mode state with ladder
/// amplitudes `resource`, using separate per-mode damping factors.
pub fn two_mode_entry(
    resource: &[Complex64],
    q: usize,
    gamma1_t: f64,
    gamma2_t: f64,
    (a1, b1): (usize, usize),
    (a2, b2): (usize, usize),
) -> Complex64 {
    let amp = |a: usize, b: usize| {
        if a == b + q && b < resource.len() {
            resource[b]
        } else {
            c(0.0, 0.0)
        }
    };
    let da = a1 as f64 - a2 as f64;
    let db = b1 as f64 - b2 as f64;
    amp(a1, b1) * amp(a2, b2).conj() * (-0.5 * gamma1_t * da * da - 0.5 * gamma2_t * db * db).exp()
}

/// Bob's normalized density matrix on `|0> .. |N'>` after Alice's joint
/// measurement `(n_sum, theta)` on a dephased resource and Bob's correction,
/// from explicit sums over Alice's and the target's Fock indices.
pub fn tripartite_bob_density(
    resource: &[Complex64],
    q: usize,
    target: &[Complex64],
    gamma1_t: f64,
    gamma2_t: f64,
    n_sum: usize,
    theta: f64,
) -> DMatrix<Complex64> {
    let n_prime = n_sum - q;
    let d = |k: usize| target.get(k).copied().unwrap_or_default();
    let bra =
        |j: usize| Complex64::from_polar(1.0 / ((n_sum + 1) as f64).sqrt(), -(j as f64) * theta);
    let mut bob = DMatrix::from_element(n_prime + 1, n_prime + 1, c(0.0, 0.0));
    for b1 in 0..=n_prime {
        for b2 in 0..=n_prime {
            let mut acc = c(0.0, 0.0);
            for a1 in 0..=n_sum {
                for a2 in 0..=n_sum {
                    let rho = two_mode_entry(resource, q, gamma1_t, gamma2_t, (a1, b1), (a2, b2));
                    if rho == c(0.0, 0.0) {
                        continue;
                    }
                    acc += bra(a1) * rho * d(n_sum - a1) * d(n_sum - a2).conj() * bra(a2).conj();
                }
            }
            bob[(b1, b2)] = acc;
        }
    }
    let tr: f64 = (0..=n_prime).map(|i| bob[(i, i)].re).sum();
    // relabel |n> -> |N'-n>, then exp(-i N theta)
    DMatrix::from_fn(n_prime + 1, n_prime + 1, |k, l| {
        let phase = Complex64::from_polar(1.0, -((k as f64) - (l as f64)) * theta);
        bob[(n_prime - k, n_prime - l)] * phase / tr
    })
}

/// `|| Pi_N |psi> ||^2` for the projector onto `N_a + N_T = N` on the
/// explicit tripartite pure state.
pub fn number_sum_probability(
    resource: &[Complex64],
    q: usize,
    target: &[Complex64],
    n_sum: usize,
) -> f64 {
    let mut acc = 0.0;
    for (n, f) in resource.iter().enumerate() {
        for (k, d) in target.iter().enumerate() {
            if n + q + k == n_sum {
                acc += (f * d).norm_sqr();
            }
        }
    }
    acc
}
