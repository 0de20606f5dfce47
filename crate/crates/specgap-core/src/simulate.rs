//! Finite random realizations of the information-plus-noise ensemble.
//!
//! A realization is `B = A A*` with `A = n^{-1/2}(R + T^{1/2} X)`, where
//! `R = [diag(√(n uᵢ)) | 0]` and `T = diag(tᵢ)` are diagonal in a common
//! basis (making the commutation hypothesis exact by construction) and `X`
//! has iid standardized entries. Eigenvalues are extracted as squared
//! singular values of `A` rather than by forming `B`, which halves the
//! conditioning.
//!
//! Sampling is reproducible: trial `k` uses a ChaCha stream seeded by a
//! splitmix-style mix of `(master_seed, k)`, so trials are independent and
//! any subset can be regenerated in isolation.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
// Load-bearing for the standalone no_std build; dev-dependency feature
// unification links std into test builds, whose inherent f64 methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spectrum::{JointSpectrum, SpectrumError};
use crate::C64;

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Iteration cap handed to the SVD; exceeding it is a decomposition failure.
const SVD_MAX_SWEEPS: usize = 250_000;

/// Law of the iid entries of `X`. All are standardized: mean 0, unit second
/// absolute moment, and `E x² = 0` in the complex case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryDist {
    GaussReal,
    GaussComplex,
    Rademacher,
}

/// Runtime failures of the simulation module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimError {
    /// The singular value decomposition did not converge.
    DecompositionFailure,
    /// A CDF argument was empty.
    EmptyCdf,
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DecompositionFailure => write!(f, "singular value decomposition failed"),
            Self::EmptyCdf => write!(f, "empty CDF"),
        }
    }
}

impl core::error::Error for SimError {}

/// Recipe for one random ensemble: dimensions, entry law, the `(u, t)`
/// profiles that expand to the `p` paired diagonal slots, and the master
/// seed all trial streams derive from.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub p: usize,
    pub n: usize,
    pub entry_dist: EntryDist,
    u_profile: Vec<(f64, f64)>,
    t_profile: Vec<(f64, f64)>,
    pub master_seed: u64,
    /// Conjugate `R` and `T` by a shared random orthogonal (or unitary)
    /// matrix, exercising non-diagonal code paths without changing the
    /// joint spectrum.
    pub rotate: bool,
}

impl EnsembleSpec {
    /// Builds a spec from weighted value profiles. Each profile expands to
    /// exactly `p` slots by largest-remainder rounding and the two expansions
    /// are paired index-wise.
    pub fn new(
        p: usize,
        n: usize,
        entry_dist: EntryDist,
        u_profile: &[(f64, f64)],
        t_profile: &[(f64, f64)],
        master_seed: u64,
    ) -> Result<Self, SpectrumError> {
        if p == 0 || n == 0 {
            return Err(SpectrumError::InvalidAspect);
        }
        validate_profile(u_profile, false)?;
        validate_profile(t_profile, true)?;
        Ok(Self {
            p,
            n,
            entry_dist,
            u_profile: u_profile.to_vec(),
            t_profile: t_profile.to_vec(),
            master_seed,
            rotate: false,
        })
    }

    /// Spec whose `(u, t)` slots realize the atoms of a joint spectrum,
    /// so the induced empirical law matches `H` up to rounding of `wᵢ·p`.
    pub fn from_joint_spectrum(
        h: &JointSpectrum,
        p: usize,
        n: usize,
        entry_dist: EntryDist,
        master_seed: u64,
    ) -> Result<Self, SpectrumError> {
        let u: Vec<(f64, f64)> = h.atoms().iter().map(|a| (a.u, a.w)).collect();
        let t: Vec<(f64, f64)> = h.atoms().iter().map(|a| (a.t, a.w)).collect();
        Self::new(p, n, entry_dist, &u, &t, master_seed)
    }

    /// The paired `(u, t)` diagonals of length `p`.
    pub fn expanded_pairs(&self) -> (Vec<f64>, Vec<f64>) {
        (
            expand_profile(&self.u_profile, self.p),
            expand_profile(&self.t_profile, self.p),
        )
    }

    /// Empirical joint law `H_n` induced by the expanded pairs.
    pub fn induced_spectrum(&self) -> Result<JointSpectrum, SpectrumError> {
        let (u, t) = self.expanded_pairs();
        JointSpectrum::from_model_pairs(&u, &t)
    }

    /// Aspect ratio `p/n` of the finite model.
    pub fn aspect(&self) -> f64 {
        self.p as f64 / self.n as f64
    }
}

fn validate_profile(profile: &[(f64, f64)], strict_positive: bool) -> Result<(), SpectrumError> {
    if profile.is_empty() {
        return Err(SpectrumError::EmptySpectrum);
    }
    let mut sum = 0.0;
    for &(v, w) in profile {
        if strict_positive && !(v > 0.0) {
            return Err(SpectrumError::NonpositiveNoise(v));
        }
        if !strict_positive && !(v >= 0.0) {
            return Err(SpectrumError::NegativeInformation(v));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(SpectrumError::NonpositiveWeight(w));
        }
        sum += w;
    }
    if (sum - 1.0).abs() >= crate::spectrum::WEIGHT_SUM_TOL {
        return Err(SpectrumError::WeightSumInvalid(sum));
    }
    Ok(())
}

/// Largest-remainder expansion of a weighted profile to exactly `p` slots,
/// in profile order. Ties go to the lower index, so the expansion is
/// deterministic.
fn expand_profile(profile: &[(f64, f64)], p: usize) -> Vec<f64> {
    let wsum: f64 = profile.iter().map(|e| e.1).sum();
    let mut counts: Vec<usize> = Vec::with_capacity(profile.len());
    let mut rems: Vec<(f64, usize)> = Vec::with_capacity(profile.len());
    let mut assigned = 0usize;
    for (i, &(_, w)) in profile.iter().enumerate() {
        let ideal = w / wsum * p as f64;
        let base = ideal.floor() as usize;
        counts.push(base);
        rems.push((ideal - base as f64, i));
        assigned += base;
    }
    // hand out the remaining slots by descending fractional remainder
    let mut left = p - assigned.min(p);
    rems.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, i) in rems.iter() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    let mut out = Vec::with_capacity(p);
    for (i, &(v, _)) in profile.iter().enumerate() {
        out.extend(core::iter::repeat_n(v, counts[i]));
    }
    out
}

/// Ascending eigenvalues of one realization of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSample {
    eigs: Vec<f64>,
    clamped: usize,
}

impl EigenSample {
    /// Eigenvalues, ascending; length `p`, all `≥ 0`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigs
    }

    /// How many raw values fell below `-1e-10` and were clamped to zero.
    /// Always zero on the squared-singular-value path; kept for audit.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stable 64-bit mix of `(master_seed, trial_index)`: a splitmix-style
/// finalizer over `master + (trial + 1)·γ`. Bit-exact across runs of this
/// implementation; trials get well-separated stream seeds.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_real(rng: &mut ChaCha8Rng, dist: EntryDist) -> f64 {
    match dist {
        EntryDist::GaussReal | EntryDist::GaussComplex => rng.sample(StandardNormal),
        EntryDist::Rademacher => {
            if rng.gen::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// One standardized entry. For `GaussComplex` this is `(ξ + iη)/√2` with
/// independent standard normals, so `E x = 0`, `E|x|² = 1`, `E x² = 0`.
fn draw_entry(rng: &mut ChaCha8Rng, dist: EntryDist) -> C64 {
    match dist {
        EntryDist::GaussComplex => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        }
        _ => C64::new(draw_real(rng, dist), 0.0),
    }
}

fn is_complex(dist: EntryDist) -> bool {
    matches!(dist, EntryDist::GaussComplex)
}

/// Builds the scaled data matrix `A = n^{-1/2}(R + T^{1/2} X)` for one trial
/// and returns its singular values (unsorted).
fn data_matrix_singular_values(
    spec: &EnsembleSpec,
    trial_index: u64,
) -> Result<Vec<f64>, SimError> {
    let (u, t) = spec.expanded_pairs();
    let (p, n) = (spec.p, spec.n);
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.master_seed, trial_index));

    if is_complex(spec.entry_dist) {
        let q = spec.rotate.then(|| random_unitary(p, &mut rng));
        let mut a = DMatrix::<C64>::from_fn(p, n, |i, j| {
            let signal = if i == j { (n as f64 * u[i]).sqrt() } else { 0.0 };
            let x = draw_entry(&mut rng, spec.entry_dist);
            (C64::new(signal, 0.0) + t[i].sqrt() * x) * inv_sqrt_n
        });
        if let Some(q) = q {
            a = q * a;
        }
        a.try_svd_unordered(false, false, f64::EPSILON, SVD_MAX_SWEEPS)
            .map(|svd| svd.singular_values.iter().copied().collect())
            .ok_or(SimError::DecompositionFailure)
    } else {
        let q = spec.rotate.then(|| random_orthogonal(p, &mut rng));
        let mut a = DMatrix::<f64>::from_fn(p, n, |i, j| {
            let signal = if i == j { (n as f64 * u[i]).sqrt() } else { 0.0 };
            (signal + t[i].sqrt() * draw_real(&mut rng, spec.entry_dist)) * inv_sqrt_n
        });
        if let Some(q) = q {
            a = q * a;
        }
        a.try_svd_unordered(false, false, f64::EPSILON, SVD_MAX_SWEEPS)
            .map(|svd| svd.singular_values.iter().copied().collect())
            .ok_or(SimError::DecompositionFailure)
    }
}

/// Note: rotation draws its matrix before the noise entries; the draw order
/// is part of the reproducibility contract.
fn random_orthogonal(p: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let gauss = DMatrix::<f64>::from_fn(p, p, |_, _| rng.sample(StandardNormal));
    gauss.qr().q()
}

fn random_unitary(p: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let gauss = DMatrix::<C64>::from_fn(p, p, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * FRAC_1_SQRT_2
    });
    gauss.qr().q()
}

/// Eigenvalues of one realization of `B`, ascending: the squared singular
/// values of the data matrix seeded by `(master_seed, trial_index)`.
pub fn sample_eigenvalues(spec: &EnsembleSpec, trial_index: u64) -> Result<EigenSample, SimError> {
    let svals = data_matrix_singular_values(spec, trial_index)?;
    let mut eigs: Vec<f64> = svals.iter().map(|s| s * s).collect();
    // p − n zero eigenvalues of B that the SVD of the p×n matrix can't see
    eigs.resize(spec.p, 0.0);
    let mut clamped = 0usize;
    for e in &mut eigs {
        if *e < 0.0 {
            if *e < -1e-10 {
                clamped += 1;
            }
            *e = 0.0;
        }
    }
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EigenSample { eigs, clamped })
}

/// Empirical Stieltjes transform `p^{-1} Σ 1/(λⱼ − z)` of a sample.
pub fn empirical_stieltjes(sample: &EigenSample, z: C64) -> C64 {
    debug_assert!(z.im != 0.0, "empirical Stieltjes transform needs Im z ≠ 0");
    let p = sample.eigs.len() as f64;
    sample
        .eigs
        .iter()
        .map(|&l| (C64::new(l, 0.0) - z).inv())
        .sum::<C64>()
        / p
}

/// Number of eigenvalues in the closed interval `[a, b]`.
pub fn count_in_interval(sample: &EigenSample, a: f64, b: f64) -> usize {
    debug_assert!(a <= b);
    sample.eigs.iter().filter(|&&l| l >= a && l <= b).count()
}

/// Kolmogorov–Smirnov distance between the sample's empirical CDF and a
/// reference CDF given as a nondecreasing `(x, F(x))` polyline; `F` is
/// linearly interpolated and clamped outside its range. Both one-sided
/// limits of the step function are compared at every eigenvalue.
pub fn ks_distance(sample: &EigenSample, cdf: &[(f64, f64)]) -> Result<f64, SimError> {
    if cdf.is_empty() {
        return Err(SimError::EmptyCdf);
    }
    debug_assert!(cdf.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].0 <= w[1].0));
    let p = sample.eigs.len() as f64;
    let mut d: f64 = 0.0;
    for (j, &l) in sample.eigs.iter().enumerate() {
        let f = interp_cdf(cdf, l);
        let hi = (j as f64 + 1.0) / p;
        let lo = j as f64 / p;
        d = d.max((hi - f).abs()).max((lo - f).abs());
    }
    Ok(d)
}

fn interp_cdf(cdf: &[(f64, f64)], x: f64) -> f64 {
    if x <= cdf[0].0 {
        return cdf[0].1;
    }
    if x >= cdf[cdf.len() - 1].0 {
        return cdf[cdf.len() - 1].1;
    }
    // binary search for the bracketing segment
    let mut lo = 0usize;
    let mut hi = cdf.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cdf[mid].0 <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (x0, f0) = cdf[lo];
    let (x1, f1) = cdf[hi];
    if x1 == x0 {
        f0
    } else {
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }
}

/// Checks eigenvalue interlacing between the companion matrix
/// `B̲ = A* A` (n×n) of one realization and its leading principal
/// (n−1)×(n−1) submatrix, within `slack = 1e-9`.
///
/// Both spectra are obtained from singular values: dropping the last column
/// of `A` is exactly dropping the last row and column of `B̲`.
pub fn interlacing_check(spec: &EnsembleSpec, trial_index: u64) -> Result<bool, SimError> {
    let svals = data_matrix_singular_values(spec, trial_index)?;
    let mut full: Vec<f64> = svals.iter().map(|s| s * s).collect();
    full.resize(spec.n, 0.0); // n − p zero eigenvalues when n > p
    full.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let (u, t) = spec.expanded_pairs();
    let inv_sqrt_n = 1.0 / (spec.n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.master_seed, trial_index));
    // regenerate the same realization (same draw order), then drop column n−1
    let sub_svals: Vec<f64> = if is_complex(spec.entry_dist) {
        let q = spec.rotate.then(|| random_unitary(spec.p, &mut rng));
        let mut a = DMatrix::<C64>::from_fn(spec.p, spec.n, |i, j| {
            let signal = if i == j {
                (spec.n as f64 * u[i]).sqrt()
            } else {
                0.0
            };
            let x = draw_entry(&mut rng, spec.entry_dist);
            (C64::new(signal, 0.0) + t[i].sqrt() * x) * inv_sqrt_n
        });
        if let Some(q) = q {
            a = q * a;
        }
        let a = a.remove_column(spec.n - 1);
        a.try_svd_unordered(false, false, f64::EPSILON, SVD_MAX_SWEEPS)
            .map(|svd| svd.singular_values.iter().copied().collect())
            .ok_or(SimError::DecompositionFailure)?
    } else {
        let q = spec.rotate.then(|| random_orthogonal(spec.p, &mut rng));
        let mut a = DMatrix::<f64>::from_fn(spec.p, spec.n, |i, j| {
            let signal = if i == j {
                (spec.n as f64 * u[i]).sqrt()
            } else {
                0.0
            };
            (signal + t[i].sqrt() * draw_real(&mut rng, spec.entry_dist)) * inv_sqrt_n
        });
        if let Some(q) = q {
            a = q * a;
        }
        let a = a.remove_column(spec.n - 1);
        a.try_svd_unordered(false, false, f64::EPSILON, SVD_MAX_SWEEPS)
            .map(|svd| svd.singular_values.iter().copied().collect())
            .ok_or(SimError::DecompositionFailure)?
    };
    let mut sub: Vec<f64> = sub_svals.iter().map(|s| s * s).collect();
    sub.resize(spec.n - 1, 0.0);
    sub.sort_by(|a, b| b.partial_cmp(a).unwrap());

    Ok(interlaces(&full, &sub, 1e-9))
}

/// `λ₁(A) ≥ λ₁(C) ≥ λ₂(A) ≥ … ≥ λ_{n−1}(C) ≥ λ_n(A)` within `slack`,
/// for descending `full` (length n) and `sub` (length n−1).
pub fn interlaces(full: &[f64], sub: &[f64], slack: f64) -> bool {
    if full.len() != sub.len() + 1 {
        return false;
    }
    for i in 0..sub.len() {
        if !(full[i] >= sub[i] - slack && sub[i] >= full[i + 1] - slack) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn noise_spec(p: usize, n: usize, seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(p, n, EntryDist::GaussReal, &[(0.0, 1.0)], &[(1.0, 1.0)], seed).unwrap()
    }

    #[test]
    fn scalar_model_eigenvalue_is_squared_entry() {
        // p = n = 1, u = 0, t = 1: B = x² for the realized draw.
        let spec = noise_spec(1, 1, 7);
        let sample = sample_eigenvalues(&spec, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(7, 0));
        let x: f64 = rng.sample(StandardNormal);
        assert!((sample.eigenvalues()[0] - x * x).abs() < 1e-12);
    }

    #[test]
    fn noise_scaling_t_four() {
        // T = 4I scales every eigenvalue of the t ≡ 1 run by 4 (same seed).
        let spec1 = noise_spec(8, 24, 99);
        let spec4 =
            EnsembleSpec::new(8, 24, EntryDist::GaussReal, &[(0.0, 1.0)], &[(4.0, 1.0)], 99)
                .unwrap();
        let e1 = sample_eigenvalues(&spec1, 3).unwrap();
        let e4 = sample_eigenvalues(&spec4, 3).unwrap();
        for (a, b) in e1.eigenvalues().iter().zip(e4.eigenvalues()) {
            assert!((4.0 * a - b).abs() < 1e-9 * b.max(1.0));
        }
    }

    #[test]
    fn determinism_bit_for_bit() {
        let spec = noise_spec(16, 40, 1234);
        let a = sample_eigenvalues(&spec, 5).unwrap();
        let b = sample_eigenvalues(&spec, 5).unwrap();
        assert_eq!(a, b);
        let c = sample_eigenvalues(&spec, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rank_deficiency_when_p_exceeds_n() {
        let spec = noise_spec(12, 5, 2);
        let sample = sample_eigenvalues(&spec, 0).unwrap();
        let zeros = sample.eigenvalues().iter().filter(|&&e| e < 1e-10).count();
        assert!(zeros >= 12 - 5);
        assert!(sample.eigenvalues().iter().all(|&e| e >= 0.0));
    }

    #[test]
    fn empirical_stieltjes_closed_forms() {
        let s = EigenSample {
            eigs: vec![1.0, 1.0],
            clamped: 0,
        };
        let v = empirical_stieltjes(&s, C64::new(0.0, 1.0));
        assert!((v - C64::new(0.5, 0.5)).norm() < 1e-15);

        let s0 = EigenSample {
            eigs: vec![0.0],
            clamped: 0,
        };
        let v0 = empirical_stieltjes(&s0, C64::new(0.0, 1.0));
        assert!((v0 - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn interval_counting() {
        let s = EigenSample {
            eigs: vec![0.1, 0.5, 3.0],
            clamped: 0,
        };
        assert_eq!(count_in_interval(&s, 1.0, 2.0), 0);
        let s1 = EigenSample {
            eigs: vec![1.5],
            clamped: 0,
        };
        assert_eq!(count_in_interval(&s1, 1.0, 2.0), 1);
        let s2 = EigenSample {
            eigs: vec![1.0, 2.0],
            clamped: 0,
        };
        assert_eq!(count_in_interval(&s2, 1.0, 2.0), 2);
    }

    #[test]
    fn ks_distance_quantile_construction() {
        // eigenvalues at exact quantiles (j − ½)/p of a linear ramp CDF
        let p = 50usize;
        let eigs: Vec<f64> = (0..p).map(|j| (j as f64 + 0.5) / p as f64).collect();
        let s = EigenSample { eigs, clamped: 0 };
        let cdf = vec![(0.0, 0.0), (1.0, 1.0)];
        let d = ks_distance(&s, &cdf).unwrap();
        assert!(d <= 0.5 / p as f64 + 1e-12, "d = {d}");

        let s1 = EigenSample {
            eigs: vec![1.0],
            clamped: 0,
        };
        let d1 = ks_distance(&s1, &cdf).unwrap();
        assert!(d1 <= 1.0 + 1e-12);
        assert!(ks_distance(&s1, &[]).is_err());
    }

    #[test]
    fn interlacing_small_cases() {
        assert!(interlaces(&[2.0, 1.0], &[2.0], 1e-9));
        assert!(!interlaces(&[2.0, 1.0], &[0.5], 1e-9));
        for trial in 0..10 {
            let spec = EnsembleSpec::new(
                20,
                30,
                EntryDist::GaussReal,
                &[(0.0, 0.5), (2.0, 0.5)],
                &[(1.0, 0.5), (3.0, 0.5)],
                42,
            )
            .unwrap();
            assert!(interlacing_check(&spec, trial).unwrap());
        }
    }

    #[test]
    fn largest_remainder_expansion() {
        let e = expand_profile(&[(1.0, 0.5), (4.0, 0.5)], 5);
        assert_eq!(e, vec![1.0, 1.0, 1.0, 4.0, 4.0]);
        let e = expand_profile(&[(1.0, 1.0 / 3.0), (2.0, 1.0 / 3.0), (3.0, 1.0 / 3.0)], 7);
        assert_eq!(e.len(), 7);
        assert_eq!(e.iter().filter(|&&v| v == 1.0).count(), 3);
        let e = expand_profile(&[(9.0, 1.0)], 4);
        assert_eq!(e, vec![9.0; 4]);
    }

    #[test]
    fn induced_spectrum_matches_atoms() {
        let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 0.5), (0.0, 4.0, 0.5)]).unwrap();
        let spec = EnsembleSpec::from_joint_spectrum(&h, 300, 3000, EntryDist::GaussReal, 1)
            .unwrap();
        let hn = spec.induced_spectrum().unwrap();
        assert_eq!(hn.atoms().len(), h.atoms().len());
        for (a, b) in hn.atoms().iter().zip(h.atoms()) {
            assert_eq!((a.u, a.t), (b.u, b.t));
            // weights only match up to the rounding of wᵢ·p and float summation
            assert!((a.w - b.w).abs() < 1e-12);
        }
    }

    #[test]
    fn entry_standardization_moments() {
        let n = 1_000_000usize;
        for dist in [
            EntryDist::GaussReal,
            EntryDist::GaussComplex,
            EntryDist::Rademacher,
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(2024, 0));
            let mut mean = C64::new(0.0, 0.0);
            let mut var = 0.0;
            let mut second = C64::new(0.0, 0.0);
            for _ in 0..n {
                let x = draw_entry(&mut rng, dist);
                mean += x;
                var += x.norm_sqr();
                second += x * x;
            }
            mean /= n as f64;
            var /= n as f64;
            second /= n as f64;
            assert!(mean.norm() < 5e-3, "{dist:?} mean {mean}");
            assert!((var - 1.0).abs() < 5e-3, "{dist:?} var {var}");
            if matches!(dist, EntryDist::GaussComplex) {
                assert!(second.norm() < 5e-3, "{dist:?} E x² = {second}");
            }
        }
    }

    #[test]
    fn singular_value_stability_under_perturbation() {
        // perturbing X by ‖E‖ = ε moves each singular value of the data
        // matrix by at most ε·max √tᵢ
        let spec = EnsembleSpec::new(
            15,
            25,
            EntryDist::GaussReal,
            &[(0.0, 0.5), (1.0, 0.5)],
            &[(1.0, 0.5), (4.0, 0.5)],
            5,
        )
        .unwrap();
        let (u, t) = spec.expanded_pairs();
        let inv_sqrt_n = 1.0 / (spec.n as f64).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.master_seed, 0));
        let a = DMatrix::<f64>::from_fn(spec.p, spec.n, |i, j| {
            let signal = if i == j {
                (spec.n as f64 * u[i]).sqrt()
            } else {
                0.0
            };
            (signal + t[i].sqrt() * draw_real(&mut rng, spec.entry_dist)) * inv_sqrt_n
        });
        let eps = 1e-6;
        // rank-one perturbation of X with spectral norm ε, pushed through T^{1/2}/√n
        let mut b = a.clone();
        for j in 0..spec.n {
            let bump = if j == 0 { eps } else { 0.0 };
            b[(0, j)] += t[0].sqrt() * bump * inv_sqrt_n;
        }
        let mut sa = a.singular_values().iter().copied().collect::<Vec<_>>();
        let mut sb = b.singular_values().iter().copied().collect::<Vec<_>>();
        sa.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sb.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let tmax = t.iter().fold(0.0f64, |m, &v| m.max(v));
        for (x, y) in sa.iter().zip(&sb) {
            assert!((x - y).abs() <= eps * tmax.sqrt() + 1e-12);
        }
    }

    #[test]
    fn rotation_preserves_spectrum_statistics() {
        let mut spec = EnsembleSpec::new(
            40,
            160,
            EntryDist::GaussReal,
            &[(0.0, 1.0)],
            &[(1.0, 0.5), (4.0, 0.5)],
            11,
        )
        .unwrap();
        let plain = sample_eigenvalues(&spec, 0).unwrap();
        spec.rotate = true;
        let rotated = sample_eigenvalues(&spec, 0).unwrap();
        // same law, different realization: compare coarse statistics
        let mean = |s: &EigenSample| s.eigenvalues().iter().sum::<f64>() / s.len() as f64;
        assert!((mean(&plain) - mean(&rotated)).abs() < 0.6);
        assert!(rotated.eigenvalues().iter().all(|&e| e >= 0.0));
    }
}
