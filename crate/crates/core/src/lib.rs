//! Pair coherent and pair cat states on truncated two-mode Fock spaces.
//!
//! The crate builds ladder states `sum_n f_n |n+q, n>`, dephases them with the
//! exactly solvable two-mode phase damping channel, measures their relative
//! entropy of entanglement and reduction-criterion witness, and evaluates
//! number-sum / phase-difference teleportation fidelities with them as the
//! shared resource.
//!
//! ```
//! use paircat_core::{evolve, pair_cat_coeffs, relative_entropy_of_entanglement};
//! use paircat_core::{DampingSchedule, PairCatParams};
//!
//! let cat = pair_cat_coeffs(&PairCatParams::real(2.0, 0, std::f64::consts::PI)?)?;
//! let rho = evolve(&cat, &DampingSchedule::from_degree(0.5)?);
//! let e = relative_entropy_of_entanglement(&rho)?;
//! assert!(e > 0.0);
//! # Ok::<(), paircat_core::Error>(())
//! ```

pub mod channel;
pub mod entanglement;
pub mod error;
pub mod matrix;
pub mod numerics;
pub mod states;
pub mod teleport;

pub use channel::{evolve, liouvillian_oracle, CorrelatedMatrix, DampingSchedule};
pub use entanglement::{
    closest_separable_state, default_witness_pair, hermitian_eigenvalues, reduction_witness,
    relative_entropy_of_entanglement, relative_entropy_to_diagonal, von_neumann_entropy, SignedLog,
    Spectrum, WitnessReport,
};
pub use error::{Error, Result};
pub use matrix::HermitianMatrix;
pub use numerics::{bessel_i, log_factorial, pair_amplitude, LogAmplitude};
pub use states::{
    normalization_nphi, normalization_nq, pair_cat_coeffs, pair_cat_coeffs_with_tail,
    pair_coherent_coeffs, schmidt_entropy, PairCatParams, SchmidtVector, DEFAULT_N_MAX,
};
pub use teleport::{
    average_fidelity, average_fidelity_damped, bob_state_damped,
    coherent_average_fidelity_closed_form, coherent_average_fidelity_damped_closed_form,
    coherent_target, conditional_bob_state_pure, fidelity_given_n, fidelity_given_n_damped,
    outcome_probability, phase_eigenstate, MeasurementOutcome, TargetState, Teleportation,
    DEFAULT_K_MAX,
};
