//! Independent ground truth for validating the solver.
//!
//! Three routes that never call the fixed-point iteration they check:
//! the closed-form Marchenko–Pastur law (the `u ≡ 0`, `t ≡ σ²` reduction),
//! the algebraic identity `g = σ² s` forced by constant noise, and
//! brute-force averaged empirical spectra of small ensembles.

use alloc::vec;
use alloc::vec::Vec;

// Load-bearing for the standalone no_std build; dev-dependency feature
// unification links std into test builds, whose inherent f64 methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::simulate::{sample_eigenvalues, EnsembleSpec, SimError};
use crate::solver::{solve_primal, SolverError, SolverOptions};
use crate::spectrum::{JointSpectrum, SpectrumError};
use crate::C64;

/// Parameters of the Marchenko–Pastur special case `T = σ²I`, `R = 0`,
/// with aspect ratio `y ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpParams {
    y: f64,
    sigma2: f64,
}

impl MpParams {
    pub fn new(y: f64, sigma2: f64) -> Result<Self, SpectrumError> {
        if !(y > 0.0 && y <= 1.0) {
            return Err(SpectrumError::InvalidAspect);
        }
        if !(sigma2 > 0.0) {
            return Err(SpectrumError::NonpositiveNoise(sigma2));
        }
        Ok(Self { y, sigma2 })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// Support endpoints `σ²(1 ∓ √y)²` of the Marchenko–Pastur law.
pub fn mp_support(mp: &MpParams) -> (f64, f64) {
    let r = mp.y.sqrt();
    (
        mp.sigma2 * (1.0 - r) * (1.0 - r),
        mp.sigma2 * (1.0 + r) * (1.0 + r),
    )
}

/// Closed-form Marchenko–Pastur density
/// `√((b − x)(x − a)) / (2π σ² x y)` on `[a, b]`, zero outside.
///
/// Implemented directly from the formula; this is the designated
/// independent oracle and must never route through the solver.
pub fn mp_density(x: f64, mp: &MpParams) -> f64 {
    let (a, b) = mp_support(mp);
    if x <= 0.0 || x < a || x > b {
        return 0.0;
    }
    ((b - x) * (x - a)).sqrt() / (2.0 * core::f64::consts::PI * mp.sigma2 * x * mp.y)
}

/// Constant-noise consistency: with `t ≡ σ²` the system forces
/// `g = σ² s` identically. Solves the full system for the given
/// information atoms and returns `|g − σ² s|`; contract: below `10 · tol`.
pub fn dozier_consistency(
    z: C64,
    y: f64,
    sigma2: f64,
    u_atoms: &[(f64, f64)],
    opts: &SolverOptions,
) -> Result<f64, SolverError> {
    let triples: Vec<(f64, f64, f64)> = u_atoms.iter().map(|&(u, w)| (u, sigma2, w)).collect();
    let h = JointSpectrum::from_atoms(&triples).map_err(|_| SolverError::BadOptions)?;
    let pair = solve_primal(z, y, &h, opts)?;
    Ok((pair.g - sigma2 * pair.s).norm())
}

/// Pooled, mass-normalized eigenvalue histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending bin edges.
    pub edges: Vec<f64>,
    /// Mass per bin; sums to 1.
    pub masses: Vec<f64>,
}

impl Histogram {
    /// Cumulative distribution evaluated at the bin edges.
    pub fn cdf_at_edges(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.edges.len());
        let mut acc = 0.0;
        out.push((self.edges[0], 0.0));
        for (i, &m) in self.masses.iter().enumerate() {
            acc += m;
            out.push((self.edges[i + 1], acc));
        }
        out
    }
}

/// Brute-force oracle: pools the eigenvalues of `trials` independent
/// realizations and bins them uniformly over
/// `[min eig − 0.05, max eig + 0.05]`.
pub fn averaged_esd_oracle(
    spec: &EnsembleSpec,
    trials: u64,
    bins: usize,
) -> Result<Histogram, SimError> {
    debug_assert!(trials >= 1 && bins >= 1);
    let mut pooled: Vec<f64> = Vec::with_capacity(spec.p * trials as usize);
    for trial in 0..trials {
        pooled.extend_from_slice(sample_eigenvalues(spec, trial)?.eigenvalues());
    }
    let lo = pooled.iter().copied().fold(f64::INFINITY, f64::min) - 0.05;
    let hi = pooled.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 0.05;
    let width = (hi - lo) / bins as f64;
    let mut masses = vec![0.0f64; bins];
    let unit = 1.0 / pooled.len() as f64;
    for &e in &pooled {
        let idx = (((e - lo) / width) as usize).min(bins - 1);
        masses[idx] += unit;
    }
    let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
    Ok(Histogram { edges, masses })
}
