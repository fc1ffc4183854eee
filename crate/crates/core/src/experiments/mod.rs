//! Seeded Monte Carlo runs and their CSV output.

mod config;
pub mod csv;
mod reciprocal;
mod runner;

pub use config::{CdMode, ExperimentConfig};
pub use csv::{emit_csv, CsvRow, CsvTable};
pub use reciprocal::{run_reciprocal_mc, ReciprocalRecord, MIN_MEAN};
pub use runner::{
    conjecture_records, evaluate_pair, median, run_concentration, run_conjecture, run_trials,
    ConjectureRecord, ExperimentRecord, GridCase, TestFunction, TrialOutcome, TrialSet,
};
