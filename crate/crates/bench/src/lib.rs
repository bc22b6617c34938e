//! Fixtures shared by the benchmarks.

use paircat_core::{
    evolve, pair_cat_coeffs, CorrelatedMatrix, DampingSchedule, PairCatParams, TargetState,
    Teleportation,
};
use std::f64::consts::{FRAC_PI_2, PI};

/// The dephased `q = 0`, `phi = pi` cat on the default 101-rung ladder.
pub fn damped_cat(xi: f64, d: f64) -> CorrelatedMatrix {
    let v = pair_cat_coeffs(&PairCatParams::real(xi, 0, PI).unwrap()).unwrap();
    evolve(&v, &DampingSchedule::from_degree(d).unwrap())
}

/// `xi = 30`, `phi = pi/2` resource with a coherent target.
pub fn teleportation(alpha: f64) -> (PairCatParams, Teleportation) {
    let p = PairCatParams::real(30.0, 0, FRAC_PI_2).unwrap();
    let target = TargetState::coherent(alpha.into(), paircat_core::DEFAULT_K_MAX).unwrap();
    (p, Teleportation::new(&p, target).unwrap())
}
