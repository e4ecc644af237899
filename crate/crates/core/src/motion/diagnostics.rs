use num_complex::Complex;
use rayon::prelude::*;

use super::{motion_point, shadow_path, CurveSample, MotionConfig};
use crate::bundle::{bundle_map, bundle_map_c2, BundleParams, BundlePoint};
use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::orbit::{Direction, OrbitSegment};
use crate::scalar::Real;
use crate::solenoid::c2_distance;

fn moved<T: Real>(
    bp: &BundleParams<T>,
    base: &CorrespondenceParams<T>,
    x: &BundlePoint<T>,
    c: Complex<T>,
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<(Complex<T>, Complex<T>)> {
    Ok(motion_point(bp, base, &base.with_c(c), x, cfg, depth)?.c2())
}

/// `|∂h/∂c̄|` at `centre` from the cross stencil `centre ± h`, `centre ± ih`:
/// `|(h(c+h) - h(c-h)) + i(h(c+ih) - h(c-ih))| / 4h`, maximised over the
/// two coordinates.
#[allow(clippy::too_many_arguments)]
pub fn holomorphy_residual<T: Real>(
    bp: &BundleParams<T>,
    params_base: &CorrespondenceParams<T>,
    x: &BundlePoint<T>,
    centre: Complex<T>,
    h: T,
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::Parameter(format!("stencil spacing must be positive, got {h}")));
    }
    let i: Complex<T> = Complex::i();
    let step = Complex::new(h, T::zero());
    let stencil = [centre + step, centre - step, centre + i * step, centre - i * step];
    let v = stencil.iter().map(|&c| moved(bp, params_base, x, c, cfg, depth)).collect::<Result<Vec<_>>>()?;
    let four_h = T::lit(4.0) * h;
    let dz = ((v[0].0 - v[1].0) + i * (v[2].0 - v[3].0)).norm() / four_h;
    let dw = ((v[0].1 - v[1].1) + i * (v[2].1 - v[3].1)).norm() / four_h;
    Ok(dz.max(dw))
}

/// `max |h_u(x) - h_v(x)| / |u - v|` over distinct pairs of `grid`, with the
/// max-coordinate distance on `C^2`.
pub fn lipschitz_ratio<T: Real>(
    bp: &BundleParams<T>,
    params_base: &CorrespondenceParams<T>,
    x: &BundlePoint<T>,
    grid: &[Complex<T>],
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<T> {
    let images = grid
        .par_iter()
        .map(|&c| moved(bp, params_base, x, c, cfg, depth))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = T::zero();
    for a in 0..grid.len() {
        for b in a + 1..grid.len() {
            let dc = (grid[a] - grid[b]).norm();
            if dc > T::zero() {
                worst = worst.max(c2_distance(images[a], images[b]) / dc);
            }
        }
    }
    Ok(worst)
}

/// `|h_c(f(x)) - f_c(h_c(x))|`, with `f_c` taking the branch that the moved
/// orbit takes at its first step.
pub fn conjugacy_defect<T: Real>(
    bp: &BundleParams<T>,
    params_base: &CorrespondenceParams<T>,
    params_target: &CorrespondenceParams<T>,
    x: &BundlePoint<T>,
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<T> {
    let needed = depth + cfg.buffer + 1;
    if x.orbit.len() < needed {
        return Err(Error::ShortOrbit { needed, have: x.orbit.len() });
    }
    let hx = motion_point(bp, params_base, params_target, x, cfg, depth)?;
    let symbol = hx.shadow.orbit.symbols()[0];
    let lhs = motion_point(bp, params_base, params_target, &bundle_map(bp, x)?, cfg, depth)?.c2();
    let rhs = bundle_map_c2(params_target, bp, Direction::Forward, symbol, hx.c2())?;
    Ok(c2_distance(lhs, rhs))
}

/// Shadows `orbit` from base to target and back, returning the largest
/// deviation over the first `interior` entries.
pub fn round_trip_error<T: Real>(
    params_base: &CorrespondenceParams<T>,
    params_target: &CorrespondenceParams<T>,
    orbit: &OrbitSegment<T>,
    cfg: &MotionConfig<T>,
    interior: usize,
) -> Result<T> {
    let there = shadow_path(params_base, params_target, orbit, cfg)?;
    let back = shadow_path(params_target, params_base, &there.orbit, cfg)?;
    Ok(back
        .orbit
        .points()
        .iter()
        .zip(orbit.points())
        .take(interior + 1)
        .map(|(a, b)| (a - b).norm())
        .fold(T::zero(), |m, d| m.max(d)))
}

/// Circle-ratio dilatation: for each domain point and scale `ε`, the ratio
/// of the largest to the smallest image displacement over partners at
/// domain distance in `[0.9ε, 1.1ε]`. A scale counts once it has at least
/// two partners. The result is the max over points of the min over scales.
pub fn dilatation_estimate<T: Real>(samples: &[(Complex<T>, Complex<T>)], scales: &[T]) -> Result<T> {
    let lo = T::lit(0.9);
    let hi = T::lit(1.1);
    let per_point: Vec<Option<T>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, &(d0, f0))| {
            let mut best: Option<T> = None;
            for &eps in scales {
                let (mut big, mut small, mut count) = (T::zero(), T::infinity(), 0usize);
                for (j, &(d, f)) in samples.iter().enumerate() {
                    let dist = (d - d0).norm();
                    if j == i || dist < lo * eps || dist > hi * eps {
                        continue;
                    }
                    let m = (f - f0).norm();
                    big = big.max(m);
                    small = small.min(m);
                    count += 1;
                }
                if count >= 2 {
                    let ratio = big / small;
                    best = Some(best.map_or(ratio, |b: T| b.min(ratio)));
                }
            }
            best
        })
        .collect();
    per_point
        .into_iter()
        .flatten()
        .reduce(|a, b| a.max(b))
        .ok_or_else(|| Error::InsufficientSamples("no point has two partners at any scale".into()))
}

/// [`dilatation_estimate`] of `t ↦ γ(t)` with domain points `(t, 0)` and
/// scales `m·dt` for each `m` in `steps`.
pub fn curve_dilatation<T: Real>(curve: &CurveSample<T>, steps: &[usize]) -> Result<T> {
    let s = &curve.samples;
    if s.len() < 3 {
        return Err(Error::InsufficientSamples(format!("need at least 3 curve samples, got {}", s.len())));
    }
    let dt = (s[s.len() - 1].0 - s[0].0) / T::from_usize_lossy(s.len() - 1);
    let samples: Vec<_> = s.iter().map(|&(t, z)| (Complex::new(t, T::zero()), z)).collect();
    let scales: Vec<T> = steps.iter().map(|&m| dt * T::from_usize_lossy(m)).collect();
    dilatation_estimate(&samples, &scales)
}

#[cfg(test)]
mod tests {
    use super::super::{curve_sample, solenoid_orbit};
    use super::*;
    use crate::bundle::{bundle_point_from_orbit, choose_bundle_params};
    use crate::correspondence::annulus_bounds;
    use crate::orbit::SymbolSequence;
    use crate::scalar::cis;
    use std::f64::consts::{PI, TAU};

    type C = Complex<f64>;

    fn setup(p: u32, q: u32) -> (CorrespondenceParams<f64>, BundleParams<f64>, MotionConfig<f64>) {
        let params = CorrespondenceParams::new(p, q, C::new(0.0, 0.0)).unwrap();
        let bp = choose_bundle_params(&params, &annulus_bounds(&params)).unwrap();
        let circle: Vec<C> = (0..64).map(|i| cis(TAU * (i as f64 + 0.5) / 64.0)).collect();
        (params, bp, MotionConfig::estimate(&params, &circle).unwrap())
    }

    fn ring(f: impl Fn(C) -> C) -> Vec<(C, C)> {
        let mut v = vec![(C::new(0.0, 0.0), f(C::new(0.0, 0.0)))];
        // 8 points: ring neighbours sit outside the scale window
        for k in 0..8 {
            let z = cis(TAU * k as f64 / 8.0) * 0.1;
            v.push((z, f(z)));
        }
        v
    }

    #[test]
    fn dilatation_of_linear_maps() {
        let k = dilatation_estimate(&ring(|z| z), &[0.1]).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
        let k = dilatation_estimate(&ring(|z| z * 2.0), &[0.1]).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
        let k = dilatation_estimate(&ring(|z| z + z.conj() * 0.3), &[0.1]).unwrap();
        assert!((k - 1.3 / 0.7).abs() < 1e-9, "{k}");
        assert!(dilatation_estimate(&ring(|z| z), &[5.0]).is_err());
    }

    #[test]
    fn fixed_point_motion_is_holomorphic() {
        let (p0, bp, cfg) = setup(3, 2);
        let o = OrbitSegment::forward(&p0, C::new(1.0, 0.0), &[0; 80]).unwrap();
        let x = bundle_point_from_orbit(&bp, &o).unwrap();
        let r1 = holomorphy_residual(&bp, &p0, &x, C::new(0.0, 0.0), 1e-3, &cfg, 40).unwrap();
        assert!(r1 <= 1e-4, "{r1}");
        let r2 = holomorphy_residual(&bp, &p0, &x, C::new(0.0, 0.0), 5e-4, &cfg, 40).unwrap();
        assert!(r2 <= r1);
        // implicit derivative dw/dc = 1/(1 - 1.5 w^0.5) = -2 at w = 1
        let h = 1e-5;
        let plus = motion_point(&bp, &p0, &p0.with_c(C::new(h, 0.0)), &x, &cfg, 40).unwrap().point.base;
        let minus = motion_point(&bp, &p0, &p0.with_c(C::new(-h, 0.0)), &x, &cfg, 40).unwrap().point.base;
        assert!(((plus - minus) / (2.0 * h) - C::new(-2.0, 0.0)).norm() < 1e-5);
        let same = holomorphy_residual(&bp, &p0, &x, C::new(0.0, 0.0), 1e-3, &cfg, 40).unwrap();
        assert!(same.is_finite());
    }

    #[test]
    fn lipschitz_and_conjugacy() {
        let (p0, bp, cfg) = setup(6, 2);
        let o = solenoid_orbit(&p0, 0.7, &SymbolSequence::parse(2, "1101").unwrap(), 80).unwrap();
        let x = bundle_point_from_orbit(&bp, &o).unwrap();
        let u = cfg.u_radius * 0.9;
        let grid: Vec<C> = (0..5)
            .flat_map(|a| (0..5).map(move |b| C::new(-u + 0.5 * u * a as f64, -u + 0.5 * u * b as f64)))
            .collect();
        let l = lipschitz_ratio(&bp, &p0, &x, &grid, &cfg, 40).unwrap();
        assert!(l <= cfg.c0(), "{l}");
        let target = p0.with_c(C::new(0.0, 0.2));
        let d = conjugacy_defect(&bp, &p0, &target, &x, &cfg, 40).unwrap();
        assert!(d < 1e-9, "{d}");
        let e = round_trip_error(&p0, &target, &o, &cfg, 40).unwrap();
        assert!(e <= 2.0 * cfg.lambda.powi(cfg.buffer as i32) * cfg.eps, "{e}");
    }

    #[test]
    fn curve_dilatation_at_zero_is_one() {
        let (p, bp, cfg) = setup(6, 2);
        let tau = SymbolSequence::parse(2, "0").unwrap();
        let curve = curve_sample(&bp, &p, &tau, (0.0, PI / 2.0), 100, &cfg, 40).unwrap();
        let k = curve_dilatation(&curve, &[1, 2, 4]).unwrap();
        assert!((k - 1.0).abs() < 1e-9, "{k}");
    }
}
