//! Holomorphic motions obtained by shadowing orbits across parameters, the
//! plane curves they induce, and numerical diagnostics for both.
//!
//! Everything here measures geometry with the Euclidean metric, so the
//! distortion constant `ℓ` is 1.

mod curve;
mod diagnostics;
mod shadow;

pub use curve::{curve_sample, injectivity_check, CurveSample};
pub use diagnostics::{
    conjugacy_defect, curve_dilatation, dilatation_estimate, holomorphy_residual, lipschitz_ratio, round_trip_error,
};
pub use shadow::{branched_motion, motion_point, shadow_orbit, shadow_path, MotionPoint, Shadow};

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::correspondence::{branch_separation, estimate_expansion, CorrespondenceParams};
use crate::error::{Error, Result};
use crate::orbit::{nearest_branch, Direction, OrbitSegment, SymbolSequence};
use crate::scalar::{cis, Real};
use crate::solenoid::theta;

/// Extra orbit length beyond the series depth, absorbing the error of
/// seeding the backward sweep at the far end.
pub const DEFAULT_BUFFER: usize = 20;

/// Tie tolerance when two preimages are equally close to the reference.
pub const AMBIGUITY_TOL: f64 = 1e-12;

/// Constants of the shadowing argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionConfig<T> {
    /// Shadowing radius.
    pub eps: T,
    /// Bound on `|ψ'|` over the backward branches `ψ`.
    pub lambda: T,
    /// Metric distortion; always 1 for the Euclidean metric.
    pub ell: T,
    /// Parameter radius over which a single sweep is certified.
    pub u_radius: T,
    pub buffer: usize,
}

impl<T: Real> MotionConfig<T> {
    /// Uses the largest certified radius `ε(1 - λ)/(6ℓ)`.
    pub fn new(eps: T, lambda: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        if !(lambda > T::zero() && lambda < T::one()) {
            return Err(Error::Parameter(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        let ell = T::one();
        Ok(Self { eps, lambda, ell, u_radius: eps * (T::one() - lambda) / (T::lit(6.0) * ell), buffer: DEFAULT_BUFFER })
    }

    /// `λ` from the backward branches over `samples` and
    /// `ε = min(0.1, sep/10)` from the measured branch separation.
    pub fn estimate(params: &CorrespondenceParams<T>, samples: &[Complex<T>]) -> Result<Self> {
        let expansion = estimate_expansion(params, samples, T::lit(1e-6))?;
        let sep = branch_separation(params, samples)?;
        let eps = T::lit(0.1).min(sep / T::lit(10.0));
        Self::new(eps, expansion.backward_max)
    }

    pub fn with_buffer(mut self, buffer: usize) -> Self {
        self.buffer = buffer;
        self
    }

    /// `C_0 = ℓ/(1 - λ)`, the Lipschitz constant of the motion in `c`.
    pub fn c0(&self) -> T {
        self.ell / (T::one() - self.lambda)
    }

    /// Bound `λ^k ℓ |Δc| / (1 - λ)` for an entry `k` steps before the seed.
    pub fn entry_bound(&self, k: usize, dc: T) -> T {
        self.lambda.powi(k as i32) * self.c0() * dc
    }
}

/// Forward orbit of `e^{it}` at `c = 0` following the angle maps `θ_{τ_n}`
/// (`τ` padded with zeros).
///
/// Angles are kept modulo `2πq`, which `θ_k` respects exactly, so every
/// point lies on the circle and consecutive points satisfy the
/// correspondence to rounding. Past about `53/log2(p/q)` steps the angles
/// are no longer those of `t` itself; the backward sweep only ever uses
/// that far end as a seed.
pub fn solenoid_orbit<T: Real>(
    params: &CorrespondenceParams<T>,
    t: T,
    tau: &SymbolSequence,
    steps: usize,
) -> Result<OrbitSegment<T>> {
    if !params.c().is_zero() {
        return Err(Error::Parameter("angle addresses describe the c = 0 circle".into()));
    }
    if tau.alphabet() != params.q() {
        return Err(Error::Parameter(format!("address over {} symbols, expected q = {}", tau.alphabet(), params.q())));
    }
    let tau = tau.padded(steps);
    let period = T::TAU() * T::lit(params.q() as f64);
    let wrap = |a: T| a - (a / period).floor() * period;
    let mut a = wrap(t);
    let mut points = Vec::with_capacity(steps + 1);
    points.push(cis(t));
    for n in 0..steps {
        a = wrap(theta(params, tau.get(n), a));
        points.push(cis(a));
    }
    let symbols = points
        .windows(2)
        .map(|w| nearest_branch(params, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    OrbitSegment::from_raw(Direction::Forward, points, symbols)
}

/// Forward orbit along `word`; at `c = 0` a start on the unit circle is
/// kept on it, since plain forward iteration drifts off a repeller.
pub fn lift_forward<T: Real>(params: &CorrespondenceParams<T>, z: Complex<T>, word: &[u32]) -> Result<OrbitSegment<T>> {
    let on_circle = params.c().is_zero() && (z.norm() - T::one()).abs() < T::lit(1e-9);
    if !on_circle {
        return OrbitSegment::forward(params, z, word);
    }
    let mut points = vec![z];
    let mut w = z;
    for &k in word {
        w = params.branch_image(w, k as usize)?;
        w = w / w.norm();
        points.push(w);
    }
    OrbitSegment::from_raw(Direction::Forward, points, word.to_vec())
}
