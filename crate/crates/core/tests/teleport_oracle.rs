mod support;

use num_complex::Complex64;
use paircat_core::{
    coherent_average_fidelity_closed_form, coherent_average_fidelity_damped_closed_form,
    pair_cat_coeffs, pair_cat_coeffs_with_tail, MeasurementOutcome, PairCatParams, TargetState,
    Teleportation,
};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};
use support::{
    c, distance_up_to_phase, number_sum_probability, tripartite_bob_density, tripartite_bob_state,
};

fn small_run(xi: Complex64, q: usize, phi: f64, alpha: Complex64) -> Teleportation {
    let p = PairCatParams::with_truncation(xi, q, phi, 12).unwrap();
    let v = pair_cat_coeffs_with_tail(&p, 1e-6).unwrap();
    Teleportation::from_resource(v, TargetState::coherent(alpha, 12).unwrap())
}

#[test]
fn projection_chain_matches_conditional_state() {
    let run = small_run(Complex64::from_polar(1.2, 0.5), 1, 0.9, c(0.6, -0.2));
    let q = run.resource().q();
    for n_sum in [q, q + 3, q + 8, q + 17] {
        for theta in [0.0, 1.0, 2.5] {
            let oracle = tripartite_bob_state(
                run.resource().coeffs(),
                q,
                run.target().amplitudes(),
                n_sum,
                theta,
            )
            .unwrap();
            let ours = run
                .conditional_bob_state(&MeasurementOutcome::new(n_sum, theta))
                .unwrap();
            assert!(
                distance_up_to_phase(&ours, &oracle) < 1e-10,
                "N = {n_sum}, theta = {theta}"
            );
        }
    }
}

#[test]
fn conditional_state_ignores_theta() {
    let run = small_run(c(1.0, 0.0), 0, FRAC_PI_2, c(0.5, 0.0));
    let a = run
        .conditional_bob_state(&MeasurementOutcome::new(6, 0.0))
        .unwrap();
    for theta in [1.0, 2.5] {
        let b = run
            .conditional_bob_state(&MeasurementOutcome::new(6, theta))
            .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn number_sum_probability_at_large_xi() {
    let p = PairCatParams::real(30.0, 0, FRAC_PI_2).unwrap();
    let run = Teleportation::new(&p, TargetState::coherent(c(1.0, 0.0), 64).unwrap()).unwrap();
    let oracle = number_sum_probability(run.resource().coeffs(), 0, run.target().amplitudes(), 35);
    assert!((run.probability(35) - oracle).abs() < 1e-14);
    assert!(oracle > 0.0);
}

#[test]
fn damped_bob_state_against_explicit_projection() {
    let run = small_run(c(1.1, 0.3), 2, 0.4, c(0.7, 0.1));
    let gamma_t = 0.35;
    for n_sum in [2, 5, 9] {
        let ours = run.bob_state_damped(gamma_t, n_sum).unwrap();
        let oracle = tripartite_bob_density(
            run.resource().coeffs(),
            2,
            run.target().amplitudes(),
            gamma_t,
            gamma_t,
            n_sum,
            0.8,
        );
        for k in 0..ours.dim() {
            for l in 0..ours.dim() {
                assert!(
                    (ours.get(k, l) - oracle[(k, l)]).norm() < 1e-12,
                    "N = {n_sum} ({k}, {l})"
                );
            }
        }
        let f = run.fidelity_damped(gamma_t, n_sum).unwrap();
        let n_prime = n_sum - 2;
        // <psi_T| rho_B |psi_T> restricted to |0> .. |N'>
        let d = run.target().amplitudes();
        let mut direct = c(0.0, 0.0);
        for k in 0..=n_prime.min(d.len() - 1) {
            for l in 0..=n_prime.min(d.len() - 1) {
                direct += d[k].conj() * oracle[(k, l)] * d[l];
            }
        }
        assert!((f - direct.re).abs() < 1e-12);
    }
}

#[test]
fn sum_form_matches_closed_form_on_small_case() {
    let p = PairCatParams::real(3.0, 0, FRAC_PI_2).unwrap();
    for alpha in [0.1, 0.5, 1.0] {
        let run =
            Teleportation::new(&p, TargetState::coherent(c(alpha, 0.0), 64).unwrap()).unwrap();
        let sum = run.average_fidelity().unwrap();
        let closed = coherent_average_fidelity_closed_form(&p, alpha).unwrap();
        assert!(
            (sum - closed).abs() < 1e-9,
            "alpha = {alpha}: {sum} vs {closed}"
        );
        let sum_d = run.average_fidelity_damped(0.6).unwrap();
        let closed_d = coherent_average_fidelity_damped_closed_form(&p, alpha, 0.6).unwrap();
        assert!((sum_d - closed_d).abs() < 1e-9);
    }
}

#[test]
fn fock_target_is_reproduced_exactly() {
    let p = PairCatParams::real(2.0, 1, 0.3).unwrap();
    let run = Teleportation::new(&p, TargetState::fock(3)).unwrap();
    for n_sum in run.outcomes() {
        if run.probability(n_sum) > 0.0 {
            assert!((run.fidelity(n_sum).unwrap() - 1.0).abs() < 1e-12);
            assert!((run.fidelity_damped(1.5, n_sum).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn probabilities_sum_to_one(r in 0.5f64..8.0, q in 0usize..4, phi in 0.0f64..TAU, a in 0.0f64..2.0) {
        if let Ok(v) = pair_cat_coeffs(&PairCatParams::real(r, q, phi).unwrap()) {
            let run = Teleportation::from_resource(v, TargetState::coherent(c(a, 0.0), 64).unwrap());
            prop_assert!((run.total_probability() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fidelities_are_probabilities(r in 0.5f64..8.0, q in 0usize..4, phi in 0.0f64..TAU, a in 0.0f64..2.0, g in 0.0f64..2.0) {
        if let Ok(v) = pair_cat_coeffs(&PairCatParams::real(r, q, phi).unwrap()) {
            let run = Teleportation::from_resource(v, TargetState::coherent(c(a, 0.0), 64).unwrap());
            let pure = run.average_fidelity().unwrap();
            let damped = run.average_fidelity_damped(g).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pure));
            prop_assert!(damped >= -1e-12 && damped <= pure + 1e-12);
        }
    }
}
