//! Density and CDF recovery through the Stieltjes inversion formula, plus
//! support-gap detection and certification.
//!
//! The boundary density is `f(x) = π⁻¹ lim_{v→0⁺} Im s(x + iv)`; it is
//! approximated at a fixed small `v_eval` reached by warm-started
//! continuation. A detected gap `(c, d)` is certified on an inner interval
//! `[a, b]` by the quantities that control the deterministic-equivalent
//! resolvent there: `|1 + u g̲(x) + t s̲(x)|` bounded away from zero over
//! the atoms, and `s̲` increasing (its derivative is `∫ dF̲/(λ−x)² > 0`
//! outside the support, where the boundary pair is real).

use alloc::vec::Vec;

// Load-bearing for the standalone no_std build; dev-dependency feature
// unification links std into test builds, whose inherent f64 methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::solver::{
    continuation_solve, primal_to_companion, solve_primal_from, SolverError, SolverOptions,
    StieltjesPair,
};
use crate::spectrum::JointSpectrum;
use crate::C64;

/// Failures of density evaluation, gap detection, or certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityError {
    /// Grid bounds or size invalid (`0 < lo < hi`, `points ≥ 2`).
    BadGrid,
    /// Fewer than 3 profile nodes, or invalid thresholds.
    DegenerateProfile,
    /// Certification interval with `a ≥ b` or too few probe points.
    InvalidInterval,
    /// A solve failed; carries the grid point that broke.
    SolverAt { x: f64, source: SolverError },
}

impl core::fmt::Display for DensityError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::BadGrid => write!(f, "invalid density grid"),
            Self::DegenerateProfile => write!(f, "profile too small or thresholds invalid"),
            Self::InvalidInterval => write!(f, "invalid certification interval"),
            Self::SolverAt { x, source } => write!(f, "solver failed at x = {x}: {source}"),
        }
    }
}

impl core::error::Error for DensityError {}

/// LSD density sampled on an ascending grid, with the point mass at zero
/// carried separately.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    xs: Vec<f64>,
    fs: Vec<f64>,
    v_used: f64,
    zero_mass: f64,
}

impl DensityProfile {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    /// Imaginary offset `v` the boundary values were evaluated at.
    pub fn v_used(&self) -> f64 {
        self.v_used
    }

    /// `max(0, 1 − 1/y)`: the rank-deficiency point mass at 0 when `y > 1`.
    pub fn zero_mass(&self) -> f64 {
        self.zero_mass
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// One support gap: detected outer interval `(c, d)` with the certified
/// inner interval `[a, b]`, `c < a < b < d`. Runs touching the grid
/// boundary describe the exterior of the support rather than an interior
/// gap and are flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportGap {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub exterior: bool,
}

/// Detected gaps, ascending and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SupportGaps {
    pub gaps: Vec<SupportGap>,
}

impl SupportGaps {
    /// Interior gaps only (runs not touching the grid boundary).
    pub fn interior(&self) -> impl Iterator<Item = &SupportGap> {
        self.gaps.iter().filter(|g| !g.exterior)
    }
}

/// Numerical witnesses of a gap, from the companion boundary pair sampled
/// across the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCertificate {
    pub interval: (f64, f64),
    /// `min |1 + u g̲ + t s̲|` over probes and atoms.
    pub delta_min: f64,
    /// Smallest central-difference derivative of `Re s̲` across probes.
    pub slope_min: f64,
    /// `Re s̲` strictly increases between consecutive probes.
    pub monotone: bool,
    /// Largest `|Im s̲|` seen; a genuine gap has a (numerically) real
    /// boundary pair, so this must stay at the `v_eval` scale.
    pub im_max: f64,
    /// `delta_min > 0`, `slope_min > 0`, and `im_max ≤ √v_eval`.
    pub valid: bool,
}

/// Boundary density approximation `π⁻¹ Im s(x + i v_eval)` via
/// warm-started continuation from `opts.v_start`.
pub fn density_at(
    x: f64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
    v_eval: f64,
) -> Result<f64, DensityError> {
    if !(x > 0.0) || !(v_eval > 0.0) {
        return Err(DensityError::BadGrid);
    }
    let pair = continuation_solve(x, v_eval, y, h, opts)
        .map_err(|source| DensityError::SolverAt { x, source })?;
    Ok(pair.s.im / core::f64::consts::PI)
}

/// Density on a uniform grid, swept left to right with the previous node's
/// pair as a warm start (a capped direct solve, falling back to the full
/// continuation schedule when the warm start does not hold up).
pub fn density_grid(
    lo: f64,
    hi: f64,
    points: usize,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
    v_eval: f64,
) -> Result<DensityProfile, DensityError> {
    if !(lo > 0.0) || !(hi > lo) || points < 2 || !(v_eval > 0.0) {
        return Err(DensityError::BadGrid);
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut xs = Vec::with_capacity(points);
    let mut fs = Vec::with_capacity(points);
    let mut warm: Option<StieltjesPair> = None;
    let fast_opts = SolverOptions {
        max_iter: (opts.max_iter / 10).max(1000),
        ..*opts
    };
    for k in 0..points {
        let x = if k + 1 == points { hi } else { lo + k as f64 * step };
        let z = C64::new(x, v_eval);
        let pair = match warm {
            Some(prev) => solve_primal_from(z, y, h, &fast_opts, prev)
                .or_else(|_| continuation_solve(x, v_eval, y, h, opts)),
            None => continuation_solve(x, v_eval, y, h, opts),
        }
        .map_err(|source| DensityError::SolverAt { x, source })?;
        warm = Some(pair);
        xs.push(x);
        fs.push(pair.s.im / core::f64::consts::PI);
    }
    Ok(DensityProfile {
        xs,
        fs,
        v_used: v_eval,
        zero_mass: zero_mass(y),
    })
}

/// `max(0, 1 − 1/y)`: exact rank-deficiency mass at zero, not a solver
/// output.
pub fn zero_mass(y: f64) -> f64 {
    if y > 1.0 {
        1.0 - 1.0 / y
    } else {
        0.0
    }
}

/// Cumulative trapezoid integral of the profile plus the zero point mass.
/// The final value is the profile's mass audit.
pub fn cdf(profile: &DensityProfile) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(profile.len());
    let mut acc = profile.zero_mass;
    for k in 0..profile.len() {
        if k > 0 {
            acc += 0.5
                * (profile.fs[k] + profile.fs[k - 1])
                * (profile.xs[k] - profile.xs[k - 1]);
        }
        out.push((profile.xs[k], acc));
    }
    out
}

/// Finds maximal runs of grid nodes with `f < f_threshold` spanning at
/// least `min_width_steps` grid steps. Each run becomes an outer interval
/// `(c, d)`; the inner `[a, b]` shrinks both ends by `margin_frac·(d−c)`.
/// Runs touching the grid boundary are flagged `exterior`.
pub fn detect_gaps(
    profile: &DensityProfile,
    f_threshold: f64,
    min_width_steps: usize,
    margin_frac: f64,
) -> Result<SupportGaps, DensityError> {
    if profile.len() < 3 {
        return Err(DensityError::DegenerateProfile);
    }
    if !(f_threshold > 0.0) || !(margin_frac > 0.0 && margin_frac < 0.5) {
        return Err(DensityError::DegenerateProfile);
    }
    let n = profile.len();
    let mut gaps = Vec::new();
    let mut i = 0usize;
    while i < n {
        if profile.fs[i] < f_threshold {
            let mut j = i;
            while j + 1 < n && profile.fs[j + 1] < f_threshold {
                j += 1;
            }
            if j - i >= min_width_steps {
                let (c, d) = (profile.xs[i], profile.xs[j]);
                let margin = margin_frac * (d - c);
                gaps.push(SupportGap {
                    c,
                    a: c + margin,
                    b: d - margin,
                    d,
                    exterior: i == 0 || j == n - 1,
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(SupportGaps { gaps })
}

/// Certifies an interval `[a, b]` as a support gap by probing the companion
/// boundary pair at `probe_points` equispaced points.
///
/// Valid certificates require `delta_min > 0`, `slope_min > 0`, and a
/// numerically real boundary pair (`im_max ≤ √v_eval`); an interval inside
/// a bulk fails the realness gate because `Im s̲` stays macroscopic there.
pub fn certify_gap(
    interval: (f64, f64),
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
    v_eval: f64,
    probe_points: usize,
) -> Result<GapCertificate, DensityError> {
    let (a, b) = interval;
    if !(a < b) || probe_points < 3 || !(v_eval > 0.0) {
        return Err(DensityError::InvalidInterval);
    }
    let step = (b - a) / (probe_points - 1) as f64;
    let mut xs = Vec::with_capacity(probe_points);
    let mut s_bars = Vec::with_capacity(probe_points);
    let mut delta_min = f64::INFINITY;
    let mut im_max: f64 = 0.0;
    let fast_opts = SolverOptions {
        max_iter: (opts.max_iter / 10).max(1000),
        ..*opts
    };
    let mut warm: Option<StieltjesPair> = None;
    for k in 0..probe_points {
        let x = if k + 1 == probe_points {
            b
        } else {
            a + k as f64 * step
        };
        let z = C64::new(x, v_eval);
        let pair = match warm {
            Some(prev) => solve_primal_from(z, y, h, &fast_opts, prev)
                .or_else(|_| continuation_solve(x, v_eval, y, h, opts)),
            None => continuation_solve(x, v_eval, y, h, opts),
        }
        .map_err(|source| DensityError::SolverAt { x, source })?;
        warm = Some(pair);
        let cpair = primal_to_companion(pair, z, y)
            .map_err(|source| DensityError::SolverAt { x, source })?;
        for atom in h.atoms() {
            let witness = C64::new(1.0, 0.0) + atom.u * cpair.g_bar + atom.t * cpair.s_bar;
            delta_min = delta_min.min(witness.norm());
        }
        im_max = im_max.max(cpair.s_bar.im.abs());
        xs.push(x);
        s_bars.push(cpair.s_bar);
    }

    let mut slope_min = f64::INFINITY;
    for k in 1..probe_points - 1 {
        let slope = (s_bars[k + 1].re - s_bars[k - 1].re) / (xs[k + 1] - xs[k - 1]);
        slope_min = slope_min.min(slope);
    }
    let monotone = s_bars.windows(2).all(|w| w[1].re > w[0].re);

    Ok(GapCertificate {
        interval,
        delta_min,
        slope_min,
        monotone,
        im_max,
        valid: delta_min > 0.0 && slope_min > 0.0 && im_max <= v_eval.sqrt(),
    })
}
