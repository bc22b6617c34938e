//! Parameter sweeps over pair cat states with CSV output.

pub mod config;
pub mod sweep;

pub use config::{Command, ConfigError, Grid, Mode, Overrides, SweepConfig};
pub use sweep::{
    run, run_entanglement_sweep, run_fidelity_sweep, run_witness_report, SweepError, Table,
};
