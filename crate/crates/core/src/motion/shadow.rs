use num_complex::Complex;

use super::{lift_forward, MotionConfig, AMBIGUITY_TOL};
use crate::bundle::{bundle_point_from_orbit, BundleParams, BundlePoint};
use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::orbit::{nearest_branch, Direction, OrbitSegment, SymbolSequence};
use crate::scalar::Real;

/// An orbit at the target parameter together with its error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadow<T> {
    pub orbit: OrbitSegment<T>,
    /// `bounds[i]` bounds the distance of entry `i` from the exact shadow.
    pub bounds: Vec<T>,
    /// `max_i |w_i - z_i|` against the input orbit.
    pub max_drift: T,
    /// Number of parameter sub-steps used.
    pub links: usize,
}

fn check_pair<T: Real>(u: &CorrespondenceParams<T>, v: &CorrespondenceParams<T>, orbit: &OrbitSegment<T>) -> Result<()> {
    if u.p() != v.p() || u.q() != v.q() {
        return Err(Error::Parameter("shadowing must keep p and q fixed".into()));
    }
    if orbit.direction() != Direction::Forward {
        return Err(Error::Parameter("shadowing follows forward orbits".into()));
    }
    if orbit.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    Ok(())
}

/// Backward sweep at `v`: `w_N = z_N`, then `w_{i-1}` is the preimage of
/// `w_i` nearest to `z_{i-1}`.
fn sweep<T: Real>(v: &CorrespondenceParams<T>, z: &[Complex<T>], eps: T) -> Result<(Vec<Complex<T>>, T)> {
    let n = z.len() - 1;
    let mut w = vec![z[n]; n + 1];
    let mut max_drift = T::zero();
    let tie = T::lit(AMBIGUITY_TOL);
    for i in (1..=n).rev() {
        let pre = v.preimages(w[i])?;
        let mut best = (usize::MAX, T::infinity());
        let mut second = T::infinity();
        for (j, zeta) in pre.iter().enumerate() {
            let d = (zeta - z[i - 1]).norm();
            if d < best.1 {
                second = best.1;
                best = (j, d);
            } else if d < second {
                second = d;
            }
        }
        if second - best.1 <= tie {
            return Err(Error::AmbiguousBranch { index: i - 1, gap: (second - best.1).to_f64_lossy() });
        }
        if !(best.1 < eps) {
            return Err(Error::ShadowEscape { index: i - 1, drift: best.1.to_f64_lossy(), eps: eps.to_f64_lossy() });
        }
        max_drift = max_drift.max(best.1);
        w[i - 1] = pre[best.0];
    }
    Ok((w, max_drift))
}

fn assemble<T: Real>(
    v: &CorrespondenceParams<T>,
    w: Vec<Complex<T>>,
    cfg: &MotionConfig<T>,
    dc: T,
    max_drift: T,
    links: usize,
) -> Result<Shadow<T>> {
    let n = w.len() - 1;
    let symbols = w
        .windows(2)
        .map(|pair| nearest_branch(v, pair[0], pair[1]))
        .collect::<Result<Vec<_>>>()?;
    let bounds = (0..=n).map(|i| cfg.entry_bound(n - i, dc)).collect();
    Ok(Shadow { orbit: OrbitSegment::from_raw(Direction::Forward, w, symbols)?, bounds, max_drift, links })
}

fn identity<T: Real>(orbit: &OrbitSegment<T>) -> Shadow<T> {
    Shadow { orbit: orbit.clone(), bounds: vec![T::zero(); orbit.len() + 1], max_drift: T::zero(), links: 0 }
}

/// One backward sweep from parameter `u` to `v`, which must be closer than
/// the certified radius.
pub fn shadow_orbit<T: Real>(
    params_u: &CorrespondenceParams<T>,
    params_v: &CorrespondenceParams<T>,
    orbit_u: &OrbitSegment<T>,
    cfg: &MotionConfig<T>,
) -> Result<Shadow<T>> {
    check_pair(params_u, params_v, orbit_u)?;
    let dc = (params_v.c() - params_u.c()).norm();
    if dc == T::zero() {
        return Ok(identity(orbit_u));
    }
    if !(dc < cfg.u_radius) {
        return Err(Error::Parameter(format!("|u - v| = {dc} is not below the certified radius {}", cfg.u_radius)));
    }
    let (w, drift) = sweep(params_v, orbit_u.points(), cfg.eps)?;
    assemble(params_v, w, cfg, dc, drift, 1)
}

/// Shadowing along the segment from `u` to `v` in sub-steps of at most
/// `0.9 U`, each sweep using the previous orbit as its reference.
///
/// Every sweep is seeded at the same far endpoint, so the result is still an
/// exact backward orbit at `v` and the per-entry bounds refer to the whole
/// displacement `|u - v|`.
pub fn shadow_path<T: Real>(
    params_u: &CorrespondenceParams<T>,
    params_v: &CorrespondenceParams<T>,
    orbit_u: &OrbitSegment<T>,
    cfg: &MotionConfig<T>,
) -> Result<Shadow<T>> {
    check_pair(params_u, params_v, orbit_u)?;
    let delta = params_v.c() - params_u.c();
    let dc = delta.norm();
    if dc == T::zero() {
        return Ok(identity(orbit_u));
    }
    let link = T::lit(0.9) * cfg.u_radius;
    let links = (dc / link).ceil().to_usize().unwrap_or(1).max(1);
    let mut reference = orbit_u.points().to_vec();
    let mut max_drift = T::zero();
    for s in 1..=links {
        let c = if s == links {
            params_v.c()
        } else {
            params_u.c() + delta * (T::from_usize_lossy(s) / T::from_usize_lossy(links))
        };
        let (w, _) = sweep(&params_u.with_c(c), &reference, cfg.eps)?;
        reference = w;
    }
    for (a, b) in reference.iter().zip(orbit_u.points()) {
        max_drift = max_drift.max((a - b).norm());
    }
    assemble(params_v, reference, cfg, dc, max_drift, links)
}

/// The moved bundle point `h_c(x)` at depth `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionPoint<T> {
    pub point: BundlePoint<T>,
    pub shadow: Shadow<T>,
    /// Bound on the distance to the exact `h_c(x)` in either coordinate.
    pub error_bound: T,
}

impl<T: Real> MotionPoint<T> {
    pub fn c2(&self) -> (Complex<T>, Complex<T>) {
        self.point.c2()
    }
}

pub fn motion_point<T: Real>(
    bp: &BundleParams<T>,
    params_base: &CorrespondenceParams<T>,
    params_target: &CorrespondenceParams<T>,
    x: &BundlePoint<T>,
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<MotionPoint<T>> {
    let needed = depth + cfg.buffer;
    if x.orbit.len() < needed {
        return Err(Error::ShortOrbit { needed, have: x.orbit.len() });
    }
    let shadow = shadow_path(params_base, params_target, &x.orbit, cfg)?;
    let point = bundle_point_from_orbit(bp, &shadow.orbit.truncated(depth))?;
    let mut fibre = T::zero();
    let mut weight = bp.r;
    for b in shadow.bounds.iter().skip(1).take(depth) {
        fibre = fibre + weight * *b;
        weight = weight * bp.delta;
    }
    let error_bound = shadow.bounds[0].max(fibre + point.tail_bound);
    Ok(MotionPoint { point, shadow, error_bound })
}

/// The multivalued image of `z`: one moved base point per forward address,
/// with duplicates closer than `1e-10` merged.
#[allow(clippy::too_many_arguments)]
pub fn branched_motion<T: Real>(
    bp: &BundleParams<T>,
    params_base: &CorrespondenceParams<T>,
    params_target: &CorrespondenceParams<T>,
    z: Complex<T>,
    words: &[SymbolSequence],
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<Vec<Complex<T>>> {
    let steps = depth + cfg.buffer;
    let tol = T::lit(1e-10);
    let mut out: Vec<Complex<T>> = Vec::new();
    for word in words {
        let orbit = lift_forward(params_base, z, word.padded(steps).symbols())?;
        let x = bundle_point_from_orbit(bp, &orbit)?;
        let w = motion_point(bp, params_base, params_target, &x, cfg, depth)?.point.base;
        if !out.iter().any(|v| (v - w).norm() < tol) {
            out.push(w);
        }
    }
    Ok(out)
}
