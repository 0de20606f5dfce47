//! Experiment harness around `specgap-core`: JSON-config-driven runs that
//! bind the solver, density inversion, oracles, and ensemble simulation
//! into reproducible reports (one JSON document per run plus CSV side
//! files).

// Validation uses `!(x > 0.0)` so NaN is rejected with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiment;
pub mod formats;
pub mod report;

pub use config::ExperimentConfig;
pub use experiment::{run_gap_experiment, run_gaps_scan, run_lsd_experiment, run_rate_experiment};
pub use report::{GapReport, GapsReport, LsdReport, RateReport};

/// Harness failures, grouped by exit code:
/// validation → 2, solver/numeric → 3, no gap found → 4, IO → 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("no gap found for this configuration")]
    NoGapFound,
    #[error("gaps detected but none certified: {0}")]
    CertificationFailed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) | CliError::CertificationFailed(_) => 3,
            CliError::NoGapFound => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<specgap_core::spectrum::SpectrumError> for CliError {
    fn from(e: specgap_core::spectrum::SpectrumError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<specgap_core::solver::SolverError> for CliError {
    fn from(e: specgap_core::solver::SolverError) -> Self {
        match e {
            specgap_core::solver::SolverError::BadOptions => CliError::Validation(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<specgap_core::density::DensityError> for CliError {
    fn from(e: specgap_core::density::DensityError) -> Self {
        use specgap_core::density::DensityError as D;
        match e {
            D::SolverAt { .. } => CliError::Solver(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<specgap_core::simulate::SimError> for CliError {
    fn from(e: specgap_core::simulate::SimError) -> Self {
        CliError::Solver(e.to_string())
    }
}
