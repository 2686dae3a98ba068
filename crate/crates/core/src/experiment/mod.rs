//! Seeded experiment drivers behind the command-line tool.
//!
//! Every command reads an [`ExperimentConfig`], derives all randomness from
//! its master seed and returns CSV text whose bytes depend only on the
//! configuration, not on the thread count.

mod config;
mod runner;
mod table;

pub use config::{BaselineSection, ConcentrationSection, EstimatorName, EtaSpec, ExperimentConfig, GraphSpec};
pub use runner::{
    run_compare, run_concentration, run_generate, run_recovery, run_sweep, GenerateOutput, CONCENTRATION_COLUMNS,
    RECORD_COLUMNS, RECOVERY_COLUMNS, RECOVERY_TARGET,
};
pub use table::{Table, NA};
