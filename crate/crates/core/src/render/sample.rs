use num_complex::Complex;

use crate::correspondence::{AnnulusBounds, CorrespondenceParams};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::scalar::{cis, Real};

/// Preimage draws per step before a backward orbit is abandoned.
pub const RESAMPLE_TRIES: usize = 32;
/// Consecutive abandoned orbits before giving up.
pub const MAX_RESTARTS: usize = 1000;
/// Discarded steps of the forward chaos game.
pub const DUAL_BURN_IN: usize = 100;

/// Relative slack on the annulus so points on its boundary are kept.
const EDGE: f64 = 1e-9;

/// Random backward orbit on `J_c`: start on the unit circle, step to a
/// uniformly chosen preimage that stays in the annulus, discard `burn_in`
/// points and emit the next `n_points`.
pub fn inverse_ifs_sample<T: Real>(
    params: &CorrespondenceParams<T>,
    n_points: usize,
    burn_in: usize,
    seed: u64,
    bounds: &AnnulusBounds<T>,
) -> Result<Vec<Complex<T>>> {
    if !bounds.valid {
        return Err(Error::InvalidAnnulus { modulus: params.c().norm().to_f64_lossy() });
    }
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n_points);
    let mut restarts = 0;
    let edge = T::lit(EDGE);
    'orbit: while out.len() < n_points {
        let mut z = cis(T::lit(rng.uniform(0.0, std::f64::consts::TAU)));
        let mut steps = 0;
        loop {
            let mut next = None;
            for _ in 0..RESAMPLE_TRIES {
                let j = rng.below(params.p() as u64) as usize;
                let zeta = params.preimage_branch(z, j)?;
                if bounds.contains(zeta, edge) {
                    next = Some(zeta);
                    break;
                }
            }
            let Some(zeta) = next else {
                restarts += 1;
                if restarts > MAX_RESTARTS {
                    return Err(Error::Starvation { restarts });
                }
                continue 'orbit;
            };
            restarts = 0;
            z = zeta;
            steps += 1;
            if steps > burn_in {
                out.push(z);
                if out.len() == n_points {
                    break 'orbit;
                }
            }
        }
    }
    Ok(out)
}

/// Chaos game for the dual Julia set: forward branches chosen uniformly,
/// restricted to `|z| ≤ R_c`, started at `c`.
///
/// The disk `|z| ≤ r_c` maps into itself whenever the annulus bounds exist,
/// so that is the attracting region required here.
pub fn dual_ifs_sample<T: Real>(params: &CorrespondenceParams<T>, n_points: usize, seed: u64) -> Result<Vec<Complex<T>>> {
    let bounds = crate::correspondence::annulus_bounds(params);
    if !bounds.valid {
        return Err(Error::NoAttractor(format!("no forward-invariant disk for |c| = {}", params.c().norm())));
    }
    let limit = bounds.upper_root * (T::one() + T::lit(EDGE));
    let collapse = T::lit(T::COLLAPSE_TOL);
    let mut rng = SplitMix64::new(seed);
    let mut z = params.c();
    let mut out = Vec::with_capacity(n_points);
    let mut step = 0usize;
    while out.len() < n_points {
        let mut next = None;
        for _ in 0..RESAMPLE_TRIES {
            let k = rng.below(params.q() as u64) as usize;
            // every image of the branch point is c
            let w = if z.norm() < collapse {
                params.c()
            } else {
                params.branch_image(z, k)?
            };
            if w.norm() <= limit {
                next = Some(w);
                break;
            }
        }
        z = next.ok_or_else(|| Error::NoAttractor(format!("orbit left |z| <= {} at step {step}", limit)))?;
        step += 1;
        if step > DUAL_BURN_IN {
            out.push(z);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::annulus_bounds;

    type C = Complex<f64>;

    #[test]
    fn circle_at_zero() {
        let p = CorrespondenceParams::new(6, 2, C::new(0.0, 0.0)).unwrap();
        let pts = inverse_ifs_sample(&p, 2000, 20, 7, &annulus_bounds(&p)).unwrap();
        assert_eq!(pts.len(), 2000);
        assert!(pts.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-9));
        assert_eq!(pts, inverse_ifs_sample(&p, 2000, 20, 7, &annulus_bounds(&p)).unwrap());
    }

    #[test]
    fn annulus_containment() {
        let p = CorrespondenceParams::new(6, 2, C::new(0.0, 0.2)).unwrap();
        let b = annulus_bounds(&p);
        let pts = inverse_ifs_sample(&p, 2000, 20, 1, &b).unwrap();
        assert!(pts.iter().all(|z| z.norm() >= b.upper_root - 0.05 && z.norm() <= b.escape_radius + 0.05));
    }

    #[test]
    fn dual_cloud() {
        let p = CorrespondenceParams::new(6, 2, C::new(0.0, 0.0)).unwrap();
        let pts = dual_ifs_sample(&p, 500, 3).unwrap();
        assert!(pts.iter().all(|z| z.norm() < 1e-6));

        let p = p.with_c(C::new(0.0, 0.2));
        // forward iteration of w = 0.2i + z^3 from c converges to iy, y = 0.2 - y^3
        let mut w = C::new(0.0, 0.2);
        for _ in 0..200 {
            w = C::new(0.0, 0.2) + w * w * w;
        }
        assert!((w.im - 0.1928).abs() < 1e-4);
        let pts = dual_ifs_sample(&p, 500, 3).unwrap();
        let r = annulus_bounds(&p).upper_root;
        assert!(pts.iter().all(|z| z.norm() <= r * (1.0 + 1e-9) && (z - w).norm() < 0.02));
        assert_eq!(pts, dual_ifs_sample(&p, 500, 3).unwrap());
        assert!(matches!(dual_ifs_sample(&p.with_c(C::new(0.0, 2.0)), 5, 0), Err(Error::NoAttractor(_))));
    }
}
