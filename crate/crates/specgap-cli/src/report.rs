//! Machine-readable run reports: one JSON document per run, schema
//! versioned, deterministic given (config, seed) apart from the `runtime_ms`
//! field.

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateReport {
    pub delta_min: f64,
    pub slope_min: f64,
    pub monotone: bool,
    pub im_max: f64,
    pub valid: bool,
}

impl From<specgap_core::density::GapCertificate> for CertificateReport {
    fn from(c: specgap_core::density::GapCertificate) -> Self {
        Self {
            delta_min: c.delta_min,
            slope_min: c.slope_min,
            monotone: c.monotone,
            im_max: c.im_max,
            valid: c.valid,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapEntry {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub exterior: bool,
    pub certificate: CertificateReport,
}

/// Result of a `gaps` scan: detection plus certification, no Monte Carlo.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapsReport {
    pub schema: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub zero_mass: f64,
    pub total_mass: f64,
    pub gaps: Vec<GapEntry>,
    pub runtime_ms: u128,
}

/// Per-gap Monte Carlo verification: `violations` counts trials with at
/// least one eigenvalue inside `[a, b]`. Exterior regions carry
/// certificates but are not counted against the interior-gap claim.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapVerifyEntry {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub exterior: bool,
    pub certificate: CertificateReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_count: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapReport {
    pub schema: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub gaps: Vec<GapVerifyEntry>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KsSection {
    pub trials: u64,
    pub per_trial: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LsdReport {
    pub schema: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub zero_mass: f64,
    /// `zero_mass + ∫ f` over the grid: the mass audit.
    pub total_mass: f64,
    pub ks: KsSection,
    /// Side files written next to the report.
    pub artifacts: Vec<String>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub v_n: f64,
    /// median over seeds of `|s_n(x+iv_n) − s⁰(x+iv_n)|`
    pub median_abs: f64,
    /// median over seeds of `n·v_n·|s_n(x+iv_n) − s⁰(x+iv_n)|`
    pub median_scaled: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RateReport {
    pub schema: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub x: f64,
    pub x_in_certified_gap: bool,
    pub delta: f64,
    pub seeds: u64,
    pub rows: Vec<RateRow>,
    pub runtime_ms: u128,
}

/// Serializes a report to pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}
