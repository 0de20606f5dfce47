//! Experiment configuration: the JSON schema, defaults, validation, and
//! conversion into core types.

use serde::{Deserialize, Serialize};

use specgap_core::simulate::{EnsembleSpec, EntryDist};
use specgap_core::solver::SolverOptions;
use specgap_core::spectrum::JointSpectrum;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AtomConfig {
    pub u: f64,
    pub t: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridConfig {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub v_start: f64,
    pub v_factor: f64,
    pub v_eval: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
            damping: d.damping_init,
            v_start: d.v_start,
            v_factor: d.v_factor,
            v_eval: 1e-5,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            damping_init: self.damping,
            tol: self.tol,
            max_iter: self.max_iter,
            v_start: self.v_start,
            v_factor: self.v_factor,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EnsembleConfig {
    pub p: usize,
    pub n: usize,
    #[serde(default = "default_entry_dist")]
    pub entry_dist: EntryDistConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rotate: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EntryDistConfig {
    GaussReal,
    GaussComplex,
    Rademacher,
}

fn default_entry_dist() -> EntryDistConfig {
    EntryDistConfig::GaussReal
}

impl From<EntryDistConfig> for EntryDist {
    fn from(e: EntryDistConfig) -> Self {
        match e {
            EntryDistConfig::GaussReal => EntryDist::GaussReal,
            EntryDistConfig::GaussComplex => EntryDist::GaussComplex,
            EntryDistConfig::Rademacher => EntryDist::Rademacher,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct GapConfig {
    pub f_threshold: f64,
    pub min_width_steps: usize,
    pub margin_frac: f64,
    pub probe_points: usize,
}

impl Default for GapConfig {
    fn default() -> Self {
        Self {
            f_threshold: 1e-3,
            min_width_steps: 10,
            margin_frac: 0.05,
            probe_points: 11,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RateConfig {
    pub n_list: Vec<usize>,
    /// Exponent of `v_n = n^{-delta}`; must satisfy `delta ≤ 1/10`.
    pub delta: f64,
    pub seeds: u64,
    /// Evaluation point; defaults to the center of the first certified
    /// interior gap.
    pub x: Option<f64>,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self {
            n_list: vec![200, 400, 800, 1600],
            delta: 0.1,
            seeds: 20,
            x: None,
        }
    }
}

/// Top-level experiment configuration. `y` and `atoms` describe the
/// limiting model; everything else has spec defaults.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub y: f64,
    pub atoms: Vec<AtomConfig>,
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default)]
    pub gap: GapConfig,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub rate: Option<RateConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Validates and builds the joint spectrum.
    pub fn spectrum(&self) -> Result<JointSpectrum, CliError> {
        if !(self.y > 0.0) || !self.y.is_finite() {
            return Err(CliError::Validation(format!("y = {} must be > 0", self.y)));
        }
        let triples: Vec<(f64, f64, f64)> =
            self.atoms.iter().map(|a| (a.u, a.t, a.w)).collect();
        Ok(JointSpectrum::from_atoms(&triples)?)
    }

    pub fn validate_grid(&self) -> Result<(), CliError> {
        let g = &self.grid;
        if !(g.lo > 0.0) || !(g.hi > g.lo) || g.points < 2 {
            return Err(CliError::Validation(format!(
                "grid requires 0 < lo < hi and points ≥ 2, got lo={}, hi={}, points={}",
                g.lo, g.hi, g.points
            )));
        }
        Ok(())
    }

    /// Ensemble whose `(u, t)` slots realize the configured atoms. The
    /// induced empirical law matches the analytic atoms up to
    /// largest-remainder rounding of `wᵢ·p`.
    pub fn ensemble_spec(&self) -> Result<EnsembleSpec, CliError> {
        let e = self.ensemble.as_ref().ok_or_else(|| {
            CliError::Validation("this experiment needs an \"ensemble\" section".into())
        })?;
        let h = self.spectrum()?;
        Ok(EnsembleSpec::from_joint_spectrum(
            &h,
            e.p,
            e.n,
            e.entry_dist.into(),
            e.seed,
        )
        .map(|mut s| {
            s.rotate = e.rotate;
            s
        })?)
    }

    /// Applies command-line overrides (overrides beat config).
    pub fn with_overrides(mut self, trials: Option<u64>, seed: Option<u64>) -> Self {
        if let Some(t) = trials {
            self.trials = t;
        }
        if let Some(s) = seed {
            if let Some(e) = self.ensemble.as_mut() {
                e.seed = s;
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "y": 0.25,
        "atoms": [{"u": 0.0, "t": 1.0, "w": 1.0}],
        "grid": {"lo": 0.1, "hi": 3.0, "points": 256}
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.solver.max_iter, 50_000);
        assert_eq!(cfg.solver.v_eval, 1e-5);
        assert_eq!(cfg.gap.min_width_steps, 10);
        assert_eq!(cfg.trials, 0);
        assert!(cfg.ensemble.is_none());
        cfg.spectrum().unwrap();
        cfg.validate_grid().unwrap();
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"{
            "y": 0.1,
            "atoms": [{"u": 0.0, "t": 1.0, "w": 0.5}, {"u": 0.0, "t": 4.0, "w": 0.5}],
            "grid": {"lo": 0.2, "hi": 8.0, "points": 1024},
            "solver": {"tol": 1e-12, "max_iter": 50000, "damping": 0.5,
                       "v_start": 1.0, "v_factor": 0.5, "v_eval": 1e-5},
            "ensemble": {"p": 300, "n": 3000, "entry_dist": "gauss_real", "seed": 7},
            "gap": {"f_threshold": 1e-3, "min_width_steps": 10, "margin_frac": 0.05},
            "trials": 100
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        let again: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.ensemble_spec().unwrap().p, 300);
    }

    #[test]
    fn overrides_beat_config() {
        let text = r#"{
            "y": 0.25,
            "atoms": [{"u": 0.0, "t": 1.0, "w": 1.0}],
            "grid": {"lo": 0.1, "hi": 3.0, "points": 64},
            "ensemble": {"p": 10, "n": 40, "seed": 7},
            "trials": 5
        }"#;
        let cfg = ExperimentConfig::from_json(text)
            .unwrap()
            .with_overrides(Some(9), Some(123));
        assert_eq!(cfg.trials, 9);
        assert_eq!(cfg.ensemble.as_ref().unwrap().seed, 123);
    }

    #[test]
    fn bad_configs_are_validation_errors() {
        let bad_y = MINIMAL.replace("0.25", "-1.0");
        let cfg = ExperimentConfig::from_json(&bad_y).unwrap();
        assert!(matches!(cfg.spectrum(), Err(CliError::Validation(_))));

        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert!(matches!(
            cfg.ensemble_spec(),
            Err(CliError::Validation(_))
        ));
        assert!(ExperimentConfig::from_json("{\"y\": 1.0}").is_err());
    }
}
