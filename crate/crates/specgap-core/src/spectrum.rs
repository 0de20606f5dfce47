//! The discrete joint spectral law `H(u, t)` and shared model parameters.
//!
//! `H` is the joint distribution of the paired eigenvalues `u` (of `R R*/n`,
//! the information strength) and `t` (of `T`, the noise variance) under
//! simultaneous diagonalization. Everything downstream integrates against
//! `H`, and restricting to finitely many atoms turns every integral in the
//! fixed-point systems into an exact finite sum.

use alloc::vec::Vec;
use core::fmt;

// Load-bearing for the standalone no_std build; dev-dependency feature
// unification links std into test builds, whose inherent f64 methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on `|Σw − 1|` below which weights are silently renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// One atom of the joint law: a `(u, t)` eigenvalue pair with probability
/// weight `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAtom {
    /// Eigenvalue of `R R*/n`; nonnegative.
    pub u: f64,
    /// Eigenvalue of `T`; strictly positive.
    pub t: f64,
    /// Probability weight in `(0, 1]`.
    pub w: f64,
}

/// Validation failures when building a [`JointSpectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumError {
    /// No atoms were supplied.
    EmptySpectrum,
    /// Some noise eigenvalue `t ≤ 0`; this would make `λ₋₁ = ∫ t⁻¹ dH` infinite.
    NonpositiveNoise(f64),
    /// `|Σw − 1|` exceeded [`WEIGHT_SUM_TOL`].
    WeightSumInvalid(f64),
    /// Some information eigenvalue `u < 0`.
    NegativeInformation(f64),
    /// Some weight `w ≤ 0`.
    NonpositiveWeight(f64),
    /// Paired eigenvalue lists of different lengths.
    LengthMismatch(usize, usize),
    /// Aspect ratio `y ≤ 0` or zero dimensions.
    InvalidAspect,
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptySpectrum => write!(f, "spectrum has no atoms"),
            Self::NonpositiveNoise(t) => write!(f, "noise eigenvalue t = {t} is not > 0"),
            Self::WeightSumInvalid(s) => {
                write!(f, "atom weights sum to {s}, outside 1 ± {WEIGHT_SUM_TOL}")
            }
            Self::NegativeInformation(u) => write!(f, "information eigenvalue u = {u} is < 0"),
            Self::NonpositiveWeight(w) => write!(f, "atom weight w = {w} is not > 0"),
            Self::LengthMismatch(a, b) => {
                write!(f, "paired eigenvalue lists have lengths {a} and {b}")
            }
            Self::InvalidAspect => write!(f, "aspect ratio must be positive and finite"),
        }
    }
}

impl core::error::Error for SpectrumError {}

/// Validated, deduplicated joint law of `(u, t)` eigenvalue pairs.
///
/// Invariants (enforced at construction):
/// - at least one atom, all with `u ≥ 0`, `t > 0`, `w > 0`;
/// - weights sum to 1 within `1e-12`;
/// - no two atoms share the same `(u, t)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectrum {
    atoms: Vec<SpectralAtom>,
}

impl JointSpectrum {
    /// Builds a spectrum from `(u, t, w)` triples.
    ///
    /// Duplicate `(u, t)` pairs (exact equality) are merged by summing their
    /// weights, preserving first-occurrence order. Weights are renormalized
    /// only when `|Σw − 1| < 1e-9`; a larger deviation is an error rather
    /// than a silent rescale.
    pub fn from_atoms(atoms: &[(f64, f64, f64)]) -> Result<Self, SpectrumError> {
        if atoms.is_empty() {
            return Err(SpectrumError::EmptySpectrum);
        }
        for &(u, t, w) in atoms {
            if !(t > 0.0) || !t.is_finite() {
                return Err(SpectrumError::NonpositiveNoise(t));
            }
            if !(u >= 0.0) || !u.is_finite() {
                return Err(SpectrumError::NegativeInformation(u));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(SpectrumError::NonpositiveWeight(w));
            }
        }
        let sum: f64 = atoms.iter().map(|a| a.2).sum();
        if (sum - 1.0).abs() >= WEIGHT_SUM_TOL {
            return Err(SpectrumError::WeightSumInvalid(sum));
        }

        let mut merged: Vec<SpectralAtom> = Vec::with_capacity(atoms.len());
        for &(u, t, w) in atoms {
            match merged.iter_mut().find(|a| a.u == u && a.t == t) {
                Some(a) => a.w += w,
                None => merged.push(SpectralAtom { u, t, w }),
            }
        }
        for a in &mut merged {
            a.w /= sum;
        }
        Ok(Self { atoms: merged })
    }

    /// Builds the empirical joint law `H_n` from the length-`p` eigenvalue
    /// lists of a simultaneous diagonalization, weight `1/p` per index.
    pub fn from_model_pairs(u_list: &[f64], t_list: &[f64]) -> Result<Self, SpectrumError> {
        if u_list.len() != t_list.len() {
            return Err(SpectrumError::LengthMismatch(u_list.len(), t_list.len()));
        }
        if u_list.is_empty() {
            return Err(SpectrumError::EmptySpectrum);
        }
        let w = 1.0 / u_list.len() as f64;
        let triples: Vec<(f64, f64, f64)> = u_list
            .iter()
            .zip(t_list)
            .map(|(&u, &t)| (u, t, w))
            .collect();
        Self::from_atoms(&triples)
    }

    /// The atoms, in first-occurrence order.
    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    /// `λ₋₁ = ∫ t⁻¹ dH(u, t)`, the inverse noise moment. Finite because
    /// `t > 0` is enforced by construction.
    pub fn lambda_inv_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.w / a.t).sum()
    }

    /// Mixed moment `∫ u^k t^m dH(u, t)` as an exact weighted sum.
    pub fn joint_moment(&self, k: i32, m: i32) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.w * a.u.powi(k) * a.t.powi(m))
            .sum()
    }

    /// Largest noise eigenvalue (`‖T‖` for the limiting model).
    pub fn max_noise(&self) -> f64 {
        self.atoms.iter().map(|a| a.t).fold(0.0, f64::max)
    }

    /// Largest information eigenvalue (condition: `‖R/√n‖² = max uᵢ` finite).
    pub fn max_information(&self) -> f64 {
        self.atoms.iter().map(|a| a.u).fold(0.0, f64::max)
    }
}

/// The limit aspect ratio `y = lim p/n > 0`, optionally carrying the finite
/// dimensions it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    y: f64,
    dims: Option<(usize, usize)>,
}

impl ModelParams {
    pub fn new(y: f64) -> Result<Self, SpectrumError> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(SpectrumError::InvalidAspect);
        }
        Ok(Self { y, dims: None })
    }

    /// Finite-dimensional parameters with `y = p/n` exactly.
    pub fn from_dims(p: usize, n: usize) -> Result<Self, SpectrumError> {
        if p == 0 || n == 0 {
            return Err(SpectrumError::InvalidAspect);
        }
        Ok(Self {
            y: p as f64 / n as f64,
            dims: Some((p, n)),
        })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_point_mass() {
        let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 1.0)]).unwrap();
        assert_eq!(h.atoms().len(), 1);
        assert_eq!(h.lambda_inv_moment(), 1.0);
    }

    #[test]
    fn two_atom_inverse_moment() {
        let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 0.5), (0.0, 4.0, 0.5)]).unwrap();
        assert_eq!(h.atoms().len(), 2);
        // 0.5·1 + 0.5·0.25
        assert!((h.lambda_inv_moment() - 0.625).abs() < 1e-15);
        let h2 = JointSpectrum::from_atoms(&[(0.0, 2.0, 1.0)]).unwrap();
        assert_eq!(h2.lambda_inv_moment(), 0.5);
    }

    #[test]
    fn dedup_merges_identical_pairs() {
        let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 0.5), (0.0, 1.0, 0.5)]).unwrap();
        assert_eq!(h.atoms().len(), 1);
        assert_eq!(h.atoms()[0].w, 1.0);
    }

    #[test]
    fn dedup_is_idempotent() {
        let h = JointSpectrum::from_atoms(&[(1.0, 3.0, 0.25), (1.0, 3.0, 0.25), (2.0, 4.0, 0.5)])
            .unwrap();
        let triples: Vec<(f64, f64, f64)> = h.atoms().iter().map(|a| (a.u, a.t, a.w)).collect();
        let h2 = JointSpectrum::from_atoms(&triples).unwrap();
        assert_eq!(h.atoms(), h2.atoms());
    }

    #[test]
    fn weight_sum_gate() {
        // within 1e-9: renormalized
        let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 0.5 + 2e-10), (0.0, 4.0, 0.5)]).unwrap();
        let s: f64 = h.atoms().iter().map(|a| a.w).sum();
        assert!((s - 1.0).abs() < 1e-12);
        // at/above 1e-9: rejected
        let e = JointSpectrum::from_atoms(&[(0.0, 1.0, 0.5), (0.0, 4.0, 0.5 + 2e-9)]);
        assert!(matches!(e, Err(SpectrumError::WeightSumInvalid(_))));
    }

    #[test]
    fn rejects_bad_atoms() {
        assert!(matches!(
            JointSpectrum::from_atoms(&[]),
            Err(SpectrumError::EmptySpectrum)
        ));
        assert!(matches!(
            JointSpectrum::from_atoms(&[(0.0, 0.0, 1.0)]),
            Err(SpectrumError::NonpositiveNoise(_))
        ));
        assert!(matches!(
            JointSpectrum::from_atoms(&[(-0.5, 1.0, 1.0)]),
            Err(SpectrumError::NegativeInformation(_))
        ));
        assert!(matches!(
            JointSpectrum::from_atoms(&[(0.0, 1.0, -1.0), (0.0, 1.0, 2.0)]),
            Err(SpectrumError::NonpositiveWeight(_))
        ));
    }

    #[test]
    fn model_pairs_examples() {
        let h = JointSpectrum::from_model_pairs(&[4.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(h.atoms().len(), 2);
        assert_eq!((h.atoms()[0].u, h.atoms()[0].t, h.atoms()[0].w), (4.0, 1.0, 0.5));
        assert_eq!((h.atoms()[1].u, h.atoms()[1].t, h.atoms()[1].w), (0.0, 1.0, 0.5));

        let h = JointSpectrum::from_model_pairs(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(h.atoms().len(), 1);
        assert_eq!(h.atoms()[0].w, 1.0);

        let h = JointSpectrum::from_model_pairs(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!((h.atoms()[0].u, h.atoms()[0].t), (1.0, 3.0));
        assert_eq!((h.atoms()[1].u, h.atoms()[1].t), (2.0, 4.0));

        assert!(matches!(
            JointSpectrum::from_model_pairs(&[1.0], &[1.0, 2.0]),
            Err(SpectrumError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn weights_sum_exactly_for_any_p() {
        for p in [1usize, 2, 7, 64, 1000] {
            let u: Vec<f64> = (0..p).map(|i| (i % 3) as f64).collect();
            let t: Vec<f64> = (0..p).map(|i| 1.0 + (i % 2) as f64).collect();
            let h = JointSpectrum::from_model_pairs(&u, &t).unwrap();
            let s: f64 = h.atoms().iter().map(|a| a.w).sum();
            assert!((s - 1.0).abs() < 1e-12, "p={p}: sum={s}");
        }
    }

    #[test]
    fn model_params() {
        assert!(ModelParams::new(0.0).is_err());
        assert!(ModelParams::new(-1.0).is_err());
        let m = ModelParams::from_dims(300, 3000).unwrap();
        assert_eq!(m.y(), 0.1);
        assert_eq!(m.dims(), Some((300, 3000)));
    }

    #[test]
    fn moments_are_finite_weighted_sums() {
        let h = JointSpectrum::from_atoms(&[(1.0, 2.0, 0.25), (4.0, 0.5, 0.75)]).unwrap();
        for k in 0..4 {
            for m in -2..3 {
                assert!(h.joint_moment(k, m).is_finite());
            }
        }
        assert!((h.joint_moment(0, -1) - h.lambda_inv_moment()).abs() < 1e-15);
        assert!((h.joint_moment(1, 0) - (0.25 + 3.0)).abs() < 1e-15);
    }
}
