//! Limiting spectral distributions of information-plus-noise sample
//! covariance matrices.
//!
//! The model is `B = (1/n) (R + T^{1/2} X)(R + T^{1/2} X)*` with a p×n
//! signal matrix `R`, a nonnegative definite noise covariance `T` commuting
//! with `R R*/n`, and iid standardized noise `X`. As p, n → ∞ with
//! p/n → y, the empirical spectral distribution of `B` converges to a
//! deterministic law `F` whose Stieltjes transform solves a coupled pair of
//! fixed-point equations driven by the joint spectrum `H(u, t)` of
//! `(R R*/n, T)`.
//!
//! This crate computes that limit and everything needed to check it against
//! finite samples:
//!
//! - [`spectrum`]: the discrete joint law `H(u, t)` and model parameters;
//! - [`solver`]: damped fixed-point solves of the coupled system and its
//!   companion form, with continuation toward the real axis;
//! - [`density`]: density/CDF recovery through the Stieltjes inversion
//!   formula, support-gap detection, and gap certification;
//! - [`oracle`]: independent ground truth (closed-form Marchenko–Pastur,
//!   constant-noise consistency checks, brute-force averaged spectra);
//! - [`simulate`]: reproducible random realizations of `B`, eigenvalue
//!   extraction, and empirical-transform utilities.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the CLI live
//! in the companion `specgap-cli` crate.

#![no_std]
#![deny(unsafe_code)]
// Validation sites use `!(x > 0.0)` so NaN is rejected along with the
// out-of-range values; `x <= 0.0` would accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod density;
pub mod oracle;
pub mod simulate;
pub mod solver;
pub mod spectrum;

pub use density::{DensityProfile, GapCertificate, SupportGap, SupportGaps};
pub use simulate::{EigenSample, EnsembleSpec, EntryDist};
pub use solver::{CompanionPair, SolverOptions, StieltjesPair};
pub use spectrum::{JointSpectrum, ModelParams, SpectralAtom};

/// Complex scalar used throughout the solver.
pub type C64 = num_complex::Complex<f64>;
