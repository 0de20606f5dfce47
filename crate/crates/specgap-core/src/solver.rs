//! Fixed-point solves of the coupled Stieltjes-transform systems.
//!
//! At each `z` in the upper half-plane the limiting law is characterized by
//! the pair `(s, g)` solving
//!
//! ```text
//! s = ∫ dH(u,t) / d(u,t),   g = ∫ t dH(u,t) / d(u,t),
//! d(u,t) = u/(1 + y g) − (1 + y s t) z + t (1 − y),
//! ```
//!
//! with the unique solution in `ℂ⁺ × ℂ⁺`. The companion form, written in
//! the transforms `(s̲, g̲)` of the n×n matrix, is
//!
//! ```text
//! z = −(1 − y)/s̲ − (y/s̲) ∫ dH/(1 + u g̲ + t s̲),
//! z = −1/g̲ + y ∫ t dH/(1 + u g̲ + t s̲),
//! ```
//!
//! related to the primal pair by `s̲ = −(1−y)/z + y s` and
//! `g̲ = −1/(z (1 + y g))`. The two systems have different conditioning near
//! the real axis, so the solver falls back to the companion form when the
//! primal iteration stalls.
//!
//! The iteration is damped Picard: recompute the right-hand sides from the
//! current pair and take a convex combination with factor α. α halves when a
//! proposal leaves the half-plane or increases the residual (floor 1/64) and
//! recovers toward its initial value on improving steps.

// Load-bearing for the standalone no_std build; dev-dependency feature
// unification links std into test builds, whose inherent f64 methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectrum::JointSpectrum;
use crate::C64;

const DAMPING_FLOOR: f64 = 1.0 / 64.0;

/// Solution pair of the primal system at one `z`: `s` is the Stieltjes
/// transform of the limiting law `F`, `g` the `T`-weighted resolvent trace
/// limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesPair {
    pub s: C64,
    pub g: C64,
}

/// Solution pair of the companion system (transforms of the n×n matrix).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompanionPair {
    pub s_bar: C64,
    pub g_bar: C64,
}

/// Iteration controls shared by all solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Initial damping factor α in `(0, 1]`.
    pub damping_init: f64,
    /// Relative residual target.
    pub tol: f64,
    /// Iteration budget per solve (counts proposals, accepted or not).
    pub max_iter: usize,
    /// Largest imaginary part of the continuation schedule.
    pub v_start: f64,
    /// Geometric decay of the schedule, in `(0, 1)`.
    pub v_factor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            damping_init: 0.5,
            tol: 1e-12,
            max_iter: 50_000,
            v_start: 1.0,
            v_factor: 0.5,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<(), SolverError> {
        let ok = self.damping_init > 0.0
            && self.damping_init <= 1.0
            && self.tol > 0.0
            && self.tol.is_finite()
            && self.max_iter > 0
            && self.v_start > 0.0
            && self.v_factor > 0.0
            && self.v_factor < 1.0;
        if ok {
            Ok(())
        } else {
            Err(SolverError::BadOptions)
        }
    }
}

/// Failures of a fixed-point solve. `v` is the imaginary part of the `z`
/// being solved when the failure occurred, so continuation failures carry
/// the level that broke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverError {
    /// A denominator of the system vanished.
    PoleHit { v: f64 },
    /// Iteration budget exhausted; carries the last relative residual.
    NoConvergence { residual: f64, v: f64 },
    /// The supplied starting point was outside `ℂ⁺`.
    LeftUpperHalfPlane { v: f64 },
    /// Options violate their stated bounds.
    BadOptions,
}

impl core::fmt::Display for SolverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::PoleHit { v } => write!(f, "system denominator vanished at Im z = {v:e}"),
            Self::NoConvergence { residual, v } => write!(
                f,
                "no convergence at Im z = {v:e} (relative residual {residual:e})"
            ),
            Self::LeftUpperHalfPlane { v } => write!(
                f,
                "starting point outside the upper half-plane at Im z = {v:e}"
            ),
            Self::BadOptions => write!(f, "solver options out of range"),
        }
    }
}

impl core::error::Error for SolverError {}

fn im(z: C64) -> f64 {
    z.im
}

/// Pushes a point back into the open upper half-plane. The clamp sits far
/// below the true solution's imaginary part, which is at least
/// `Im z / (‖support‖ + |z|)²` for a probability measure.
fn clamp_im(x: C64, im_floor: f64) -> C64 {
    if x.im > 0.0 {
        x
    } else {
        C64::new(x.re, im_floor)
    }
}

/// Right-hand sides of the primal system evaluated at `(s, g)`.
fn primal_map(pair: StieltjesPair, z: C64, y: f64, h: &JointSpectrum) -> Option<(C64, C64)> {
    let one_plus_yg = C64::new(1.0, 0.0) + y * pair.g;
    if one_plus_yg.norm() == 0.0 {
        return None;
    }
    let mut fs = C64::new(0.0, 0.0);
    let mut fg = C64::new(0.0, 0.0);
    for a in h.atoms() {
        let d = a.u / one_plus_yg - (C64::new(1.0, 0.0) + y * pair.s * a.t) * z
            + C64::new(a.t * (1.0 - y), 0.0);
        if d.norm() == 0.0 {
            return None;
        }
        fs += a.w / d;
        fg += a.w * a.t / d;
    }
    Some((fs, fg))
}

/// Residual of the primal system: `(s − ∫dH/d, g − ∫t dH/d)`.
///
/// Exactly zero (in exact arithmetic) at a true solution.
pub fn system_residual(
    pair: StieltjesPair,
    z: C64,
    y: f64,
    h: &JointSpectrum,
) -> Result<(C64, C64), SolverError> {
    let (fs, fg) =
        primal_map(pair, z, y, h).ok_or(SolverError::PoleHit { v: z.im })?;
    Ok((pair.s - fs, pair.g - fg))
}

/// Right-hand sides of the companion system solved for `(s̲, g̲)`.
fn companion_map(pair: CompanionPair, z: C64, y: f64, h: &JointSpectrum) -> Option<(C64, C64)> {
    let mut sum_inv = C64::new(0.0, 0.0);
    let mut sum_t = C64::new(0.0, 0.0);
    for a in h.atoms() {
        let d = C64::new(1.0, 0.0) + a.u * pair.g_bar + a.t * pair.s_bar;
        if d.norm() == 0.0 {
            return None;
        }
        sum_inv += a.w / d;
        sum_t += a.w * a.t / d;
    }
    let fs = -(C64::new(1.0 - y, 0.0) + y * sum_inv) / z;
    let denom = z - y * sum_t;
    if denom.norm() == 0.0 || z.norm() == 0.0 {
        return None;
    }
    Some((fs, -C64::new(1.0, 0.0) / denom))
}

/// Residual of the companion system: each equation rearranged to
/// `lhs − z = 0`, evaluated at `(s̲, g̲)`.
pub fn companion_residual(
    pair: CompanionPair,
    z: C64,
    y: f64,
    h: &JointSpectrum,
) -> Result<(C64, C64), SolverError> {
    if pair.s_bar.norm() == 0.0 || pair.g_bar.norm() == 0.0 {
        return Err(SolverError::PoleHit { v: z.im });
    }
    let mut sum_inv = C64::new(0.0, 0.0);
    let mut sum_t = C64::new(0.0, 0.0);
    for a in h.atoms() {
        let d = C64::new(1.0, 0.0) + a.u * pair.g_bar + a.t * pair.s_bar;
        if d.norm() == 0.0 {
            return Err(SolverError::PoleHit { v: z.im });
        }
        sum_inv += a.w / d;
        sum_t += a.w * a.t / d;
    }
    let r1 = z + C64::new(1.0 - y, 0.0) / pair.s_bar + (y / pair.s_bar) * sum_inv;
    let r2 = z + C64::new(1.0, 0.0) / pair.g_bar - y * sum_t;
    Ok((r1, r2))
}

/// Converts a primal pair to the companion pair at the same `z`:
/// `s̲ = −(1−y)/z + y s`, `g̲ = −1/(z(1 + y g))`.
pub fn primal_to_companion(
    pair: StieltjesPair,
    z: C64,
    y: f64,
) -> Result<CompanionPair, SolverError> {
    let one_plus_yg = C64::new(1.0, 0.0) + y * pair.g;
    if z.norm() == 0.0 || one_plus_yg.norm() == 0.0 {
        return Err(SolverError::PoleHit { v: z.im });
    }
    Ok(CompanionPair {
        s_bar: -C64::new(1.0 - y, 0.0) / z + y * pair.s,
        g_bar: -C64::new(1.0, 0.0) / (z * one_plus_yg),
    })
}

/// Inverse of [`primal_to_companion`]:
/// `s = (s̲ + (1−y)/z)/y`, `g = (−1/(z g̲) − 1)/y`.
pub fn companion_to_primal(
    pair: CompanionPair,
    z: C64,
    y: f64,
) -> Result<StieltjesPair, SolverError> {
    if y == 0.0 || z.norm() == 0.0 || pair.g_bar.norm() == 0.0 {
        return Err(SolverError::PoleHit { v: z.im });
    }
    Ok(StieltjesPair {
        s: (pair.s_bar + C64::new(1.0 - y, 0.0) / z) / y,
        g: (-C64::new(1.0, 0.0) / (z * pair.g_bar) - C64::new(1.0, 0.0)) / y,
    })
}

/// Damped Picard iteration shared by both systems. `map` produces the
/// fixed-point proposal, `admissible` gates accepted iterates (half-plane
/// membership), `project` clamps an inadmissible proposal back into the
/// half-plane once the damping floor is reached, `residual` turns the pair
/// and its proposal into the scaled residual compared against `tol`.
///
/// Projection is essential above aspect ratio one: between zero and the
/// lower support edge both raw fixed-point maps send distant points deep
/// into the lower half-plane even though the damped iteration contracts
/// locally, so rejection alone can never reach the basin.
fn damped_picard<M, A, P, R>(
    start: (C64, C64),
    v: f64,
    opts: &SolverOptions,
    mut map: M,
    mut admissible: A,
    mut project: P,
    mut residual: R,
) -> Result<(C64, C64), SolverError>
where
    M: FnMut(C64, C64) -> Option<(C64, C64)>,
    A: FnMut(C64, C64) -> bool,
    P: FnMut(C64, C64) -> (C64, C64),
    R: FnMut(C64, C64, C64, C64) -> f64,
{
    let floor = DAMPING_FLOOR.min(opts.damping_init);
    let (mut a, mut b) = start;
    if !admissible(a, b) {
        return Err(SolverError::LeftUpperHalfPlane { v });
    }
    let (mut fa, mut fb) = map(a, b).ok_or(SolverError::PoleHit { v })?;
    let mut res = residual(a, b, fa, fb);
    let mut alpha = opts.damping_init;
    let mut alpha_max = opts.damping_init;

    // History of the last three accepted iterates for Δ² extrapolation.
    let mut hist: [(C64, C64); 3] = [(a, b); 3];
    let mut accepted = 0usize;

    for _ in 0..opts.max_iter {
        if res <= opts.tol {
            return Ok((a, b));
        }

        // Δ² acceleration, Steffensen style: every 8 accepted steps, try
        // the Aitken extrapolate of the last three iterates and keep it
        // only if it beats the residual. This rescues two regimes plain
        // damped Picard cannot handle: the 1 − O(√v) crawl at support
        // edges, and locally repelling fixed points (real multiplier > 1)
        // near zero above aspect ratio one, where extrapolation from three
        // near-linear iterates is accurate but waiting longer lets the
        // iterates escape the linear regime.
        if accepted >= 3 && accepted.is_multiple_of(8) {
            let ae = aitken(hist[0].0, hist[1].0, hist[2].0);
            let be = aitken(hist[0].1, hist[1].1, hist[2].1);
            if admissible(ae, be) {
                if let Some((fae, fbe)) = map(ae, be) {
                    let re = residual(ae, be, fae, fbe);
                    if re < res {
                        a = ae;
                        b = be;
                        fa = fae;
                        fb = fbe;
                        res = re;
                        hist = [(a, b); 3];
                        continue;
                    }
                }
            }
        }

        let mut an = a + alpha * (fa - a);
        let mut bn = b + alpha * (fb - b);
        // A step out of the half-plane is first retried with less damping;
        // at the floor it is projected back inside instead.
        if !admissible(an, bn) {
            if alpha > floor {
                alpha = (alpha * 0.5).max(floor);
                continue;
            }
            (an, bn) = project(an, bn);
        }
        let Some((fan, fbn)) = map(an, bn) else {
            if alpha <= floor {
                return Err(SolverError::PoleHit { v });
            }
            alpha = (alpha * 0.5).max(floor);
            continue;
        };
        // Admissible steps are always taken; the damping factor reacts to
        // the residual trend. Rejecting on a transient increase starves the
        // rotational near-neutral regime at support edges, where a moderate
        // α contracts fast but non-monotonically. Recovery is capped by the
        // tightest level that ever made the residual grow, otherwise α
        // oscillates across the stability boundary of strongly rotational
        // fixed points and the net cycle diverges.
        let rn = residual(an, bn, fan, fbn);
        if rn > res {
            alpha_max = (alpha * 0.5).max(floor);
            alpha = alpha_max;
        } else if rn < res {
            alpha = (alpha * 2.0).min(alpha_max);
        }
        a = an;
        b = bn;
        fa = fan;
        fb = fbn;
        res = rn;
        hist = [hist[1], hist[2], (a, b)];
        accepted += 1;
    }
    Err(SolverError::NoConvergence { residual: res, v })
}

/// Aitken Δ² extrapolation of three consecutive iterates; exact for a
/// scalar linear recurrence, a strong guess in the slow-crawl regime.
/// Falls back to the latest iterate if the second difference vanishes.
fn aitken(x0: C64, x1: C64, x2: C64) -> C64 {
    let d1 = x2 - x1;
    let d2 = x2 - 2.0 * x1 + x0;
    if d2.norm() == 0.0 {
        x2
    } else {
        x2 - d1 * d1 / d2
    }
}

fn primal_scale(s: C64, g: C64) -> f64 {
    1f64.max(s.norm()).max(g.norm())
}

fn run_primal(
    start: StieltjesPair,
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<StieltjesPair, SolverError> {
    let im_floor = z.im * 1e-9;
    let (s, g) = damped_picard(
        (start.s, start.g),
        z.im,
        opts,
        |s, g| primal_map(StieltjesPair { s, g }, z, y, h),
        |s, g| im(s) > 0.0 && im(g) > 0.0,
        |s, g| (clamp_im(s, im_floor), clamp_im(g, im_floor)),
        |s, g, fs, fg| (s - fs).norm().max((g - fg).norm()) / primal_scale(s, g),
    )?;
    Ok(StieltjesPair { s, g })
}

fn run_companion(
    start: CompanionPair,
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<CompanionPair, SolverError> {
    // The equation residuals follow exactly from the fixed-point
    // differences: r1 = z (s̲ − F_s)/s̲ and r2 = (g̲ − F_g)/(g̲ F_g).
    let zscale = 1f64.max(z.norm());
    let im_floor = z.im * 1e-9;
    let (s_bar, g_bar) = damped_picard(
        (start.s_bar, start.g_bar),
        z.im,
        opts,
        |s, g| companion_map(CompanionPair { s_bar: s, g_bar: g }, z, y, h),
        |s, _| im(s) > 0.0,
        |s, g| (clamp_im(s, im_floor), g),
        move |s, g, fs, fg| {
            let r1 = (z * (s - fs) / s).norm();
            let r2 = ((g - fg) / (g * fg)).norm();
            r1.max(r2) / zscale
        },
    )?;
    Ok(CompanionPair { s_bar, g_bar })
}

/// Checks the primal residual contract for a candidate pair.
fn primal_converged(pair: StieltjesPair, z: C64, y: f64, h: &JointSpectrum, tol: f64) -> bool {
    if pair.s.im <= 0.0 || pair.g.im <= 0.0 {
        return false;
    }
    match system_residual(pair, z, y, h) {
        Ok((rs, rg)) => rs.norm().max(rg.norm()) <= tol * primal_scale(pair.s, pair.g),
        Err(_) => false,
    }
}

const COLD_START: StieltjesPair = StieltjesPair {
    s: C64::new(0.0, 1.0),
    g: C64::new(0.0, 1.0),
};

/// Damped Newton iteration on the primal residuals, the last-resort
/// fallback. Above aspect ratio one, between zero and the lower support
/// edge, the solution is a repelling fixed point of both Picard maps while
/// a spurious root with negative imaginary part attracts them; Newton
/// tracks the true branch from a warm start regardless of the Picard
/// stability, and the final residual/half-plane gate in the caller rejects
/// any landing on the spurious root.
fn run_newton(
    start: StieltjesPair,
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<StieltjesPair, SolverError> {
    let mut s = start.s;
    let mut g = start.g;
    let one = C64::new(1.0, 0.0);

    // residuals and the 2×2 complex Jacobian of (s − F_s, g − F_g)
    let eval = |s: C64, g: C64| -> Option<(C64, C64, [C64; 4])> {
        let one_yg = one + y * g;
        if one_yg.norm() == 0.0 {
            return None;
        }
        let (mut fs, mut fg) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        let (mut fs_s, mut fs_g) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        let (mut fg_s, mut fg_g) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for a in h.atoms() {
            let d = a.u / one_yg - (one + y * s * a.t) * z + C64::new(a.t * (1.0 - y), 0.0);
            if d.norm() == 0.0 {
                return None;
            }
            let inv = a.w / d;
            let inv2 = inv / d;
            // ∂d/∂s = −y t z, ∂d/∂g = −u y/(1+yg)²
            let dd_s = y * a.t * z;
            let dd_g = a.u * y / (one_yg * one_yg);
            fs += inv;
            fg += a.t * inv;
            fs_s += dd_s * inv2;
            fs_g += dd_g * inv2;
            fg_s += a.t * dd_s * inv2;
            fg_g += a.t * dd_g * inv2;
        }
        let j = [one - fs_s, -fs_g, -fg_s, one - fg_g];
        Some((s - fs, g - fg, j))
    };

    let (mut rs, mut rg, mut jac) = eval(s, g).ok_or(SolverError::PoleHit { v: z.im })?;
    let mut res = rs.norm().max(rg.norm());
    for _ in 0..256 {
        if res <= opts.tol * primal_scale(s, g) {
            return Ok(StieltjesPair { s, g });
        }
        let det = jac[0] * jac[3] - jac[1] * jac[2];
        if det.norm() == 0.0 {
            return Err(SolverError::PoleHit { v: z.im });
        }
        let ds = (rs * jac[3] - rg * jac[1]) / det;
        let dg = (jac[0] * rg - jac[2] * rs) / det;
        // backtracking on the residual norm
        let mut lambda = 1.0;
        let mut taken = None;
        for _ in 0..10 {
            let sn = s - lambda * ds;
            let gn = g - lambda * dg;
            if let Some((rsn, rgn, jn)) = eval(sn, gn) {
                let rn = rsn.norm().max(rgn.norm());
                if rn < res {
                    taken = Some((sn, gn, rsn, rgn, jn, rn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match taken {
            Some((sn, gn, rsn, rgn, jn, rn)) => {
                s = sn;
                g = gn;
                rs = rsn;
                rg = rgn;
                jac = jn;
                res = rn;
            }
            None => {
                return Err(SolverError::NoConvergence {
                    residual: res / primal_scale(s, g),
                    v: z.im,
                })
            }
        }
    }
    Err(SolverError::NoConvergence {
        residual: res / primal_scale(s, g),
        v: z.im,
    })
}

/// Solves the primal system at `z ∈ ℂ⁺` from the default start `(i, i)`.
///
/// The returned pair satisfies the residual contract
/// `max(|r_s|, |r_g|) ≤ tol · max(1, |s|, |g|)` with `Im s > 0`, `Im g > 0`.
/// By uniqueness in `ℂ⁺` the result does not depend on the admissible start.
pub fn solve_primal(
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<StieltjesPair, SolverError> {
    solve_primal_from(z, y, h, opts, COLD_START)
}

/// Solves the primal system from a caller-supplied admissible start
/// (`Im s > 0`, `Im g > 0`), typically a warm start from a nearby `z`.
///
/// If the primal iteration stalls, the companion system is solved instead
/// (first from the converted start, then cold) and converted back; whatever
/// route succeeds must still pass the primal residual contract.
pub fn solve_primal_from(
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
    start: StieltjesPair,
) -> Result<StieltjesPair, SolverError> {
    opts.validate()?;
    if !(z.im > 0.0) {
        return Err(SolverError::BadOptions);
    }
    let primal_err = match run_primal(start, z, y, h, opts) {
        Ok(pair) => return Ok(pair),
        Err(e) => e,
    };
    // Stall fallback: the companion system is equivalent but conditioned
    // differently near the real axis.
    let mut companion_starts = [None, Some(CompanionPair {
        s_bar: C64::new(0.0, 1.0),
        g_bar: C64::new(0.0, 1.0),
    })];
    if let Ok(conv) = primal_to_companion(start, z, y) {
        companion_starts[0] = Some(conv);
    }
    for cstart in companion_starts.into_iter().flatten() {
        if let Ok(cpair) = run_companion(cstart, z, y, h, opts) {
            if let Ok(pair) = companion_to_primal(cpair, z, y) {
                if primal_converged(pair, z, y, h, opts.tol) {
                    return Ok(pair);
                }
            }
        }
    }
    for nstart in [start, COLD_START] {
        if let Ok(pair) = run_newton(nstart, z, y, h, opts) {
            if primal_converged(pair, z, y, h, opts.tol) {
                return Ok(pair);
            }
        }
    }
    Err(primal_err)
}

/// Solves the companion system at `z ∈ ℂ⁺`; `Im s̲ > 0` is enforced on
/// every accepted iterate.
pub fn solve_companion(
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<CompanionPair, SolverError> {
    solve_companion_from(
        z,
        y,
        h,
        opts,
        CompanionPair {
            s_bar: C64::new(0.0, 1.0),
            g_bar: C64::new(0.0, 1.0),
        },
    )
}

/// Companion solve from a caller-supplied start with `Im s̲ > 0`.
///
/// Falls back to the primal system (converted back and forth) on a stall.
pub fn solve_companion_from(
    z: C64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
    start: CompanionPair,
) -> Result<CompanionPair, SolverError> {
    opts.validate()?;
    if !(z.im > 0.0) {
        return Err(SolverError::BadOptions);
    }
    let companion_err = match run_companion(start, z, y, h, opts) {
        Ok(pair) => return Ok(pair),
        Err(e) => e,
    };
    if let Ok(primal) = run_primal(COLD_START, z, y, h, opts) {
        if let Ok(cpair) = primal_to_companion(primal, z, y) {
            if let Ok((r1, r2)) = companion_residual(cpair, z, y, h) {
                if r1.norm().max(r2.norm()) <= opts.tol * 1f64.max(z.norm()) {
                    return Ok(cpair);
                }
            }
        }
    }
    Err(companion_err)
}

/// Geometric continuation schedule from `v_start` down to `v_target`.
/// Always ends exactly at `v_target`; empty prefix when
/// `v_start ≤ v_target`, so that case reduces to a single direct solve.
fn schedule(opts: &SolverOptions, v_target: f64) -> impl Iterator<Item = f64> + '_ {
    let mut v = opts.v_start;
    core::iter::from_fn(move || {
        if v > v_target {
            let out = v;
            v *= opts.v_factor;
            Some(out)
        } else {
            None
        }
    })
    .chain(core::iter::once(v_target))
}

/// Approaches the boundary value `s(x)` of the inversion formula by solving
/// at `z = x + iv` for `v` descending geometrically from `opts.v_start` to
/// `v_target`, warm-starting each level from the previous solution.
///
/// A failed level is retried through geometric-mean midpoints (bounded
/// depth): above aspect ratio one the solution arcs quickly through the
/// half-plane as `v` falls, and a fixed-ratio schedule can step out of the
/// contraction basin.
///
/// Returns the pair at `v_target`. Failures carry the `v` that broke.
pub fn continuation_solve(
    x: f64,
    v_target: f64,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<StieltjesPair, SolverError> {
    opts.validate()?;
    if !(v_target > 0.0) {
        return Err(SolverError::BadOptions);
    }
    let mut pair = COLD_START;
    let mut v_prev: Option<f64> = None;
    for v in schedule(opts, v_target) {
        pair = match solve_primal_from(C64::new(x, v), y, h, opts, pair) {
            Ok(p) => p,
            Err(e) => match v_prev {
                Some(from) => refine_descent(x, from, v, pair, y, h, opts).map_err(|_| e)?,
                None => return Err(e),
            },
        };
        v_prev = Some(v);
    }
    Ok(pair)
}

/// Walks a failed continuation step `v_from → v_to` with an adaptive
/// sub-step in log space: halved on failure, doubled on success, always
/// landing exactly on `v_to`. Attempt count is bounded, so a genuinely
/// unreachable level still surfaces as an error.
fn refine_descent(
    x: f64,
    v_from: f64,
    v_to: f64,
    start: StieltjesPair,
    y: f64,
    h: &JointSpectrum,
    opts: &SolverOptions,
) -> Result<StieltjesPair, SolverError> {
    let total = (v_from / v_to).ln();
    let mut done = 0.0;
    let mut step = 0.5 * total;
    let mut cur = start;
    for _ in 0..96 {
        let s = step.min(total - done);
        let v_next = v_from * (-(done + s)).exp();
        match solve_primal_from(C64::new(x, v_next), y, h, opts, cur) {
            Ok(p) => {
                cur = p;
                done += s;
                if done >= total {
                    return Ok(cur);
                }
                step = (step * 2.0).min(total - done);
            }
            Err(e) => {
                step = 0.5 * s;
                if step < 1e-4 * total {
                    return Err(e);
                }
            }
        }
    }
    Err(SolverError::NoConvergence {
        residual: f64::NAN,
        v: v_to,
    })
}
