use num_complex::Complex;
use rayon::prelude::*;

use super::{motion_point, solenoid_orbit, MotionConfig};
use crate::bundle::{bundle_point_from_orbit, BundleParams};
use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::export::complex_string;
use crate::orbit::SymbolSequence;
use crate::scalar::{fmt17, Real};

/// `t ↦ γ_{c,τ}(t)`: the base point of the moved solenoid point `(t, τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample<T> {
    pub tau: SymbolSequence,
    pub c: Complex<T>,
    pub samples: Vec<(T, Complex<T>)>,
    pub truncation: usize,
    pub eps: T,
    pub lambda: T,
}

impl<T: Real> CurveSample<T> {
    pub fn points(&self) -> Vec<Complex<T>> {
        self.samples.iter().map(|s| s.1).collect()
    }

    /// A `#`-prefixed metadata line, then `t,z_re,z_im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "#τ={},c={},N={},eps={},lambda={}\nt,z_re,z_im\n",
            self.tau,
            complex_string(self.c),
            self.truncation,
            self.eps,
            self.lambda
        );
        for (t, z) in &self.samples {
            out.push_str(&format!("{},{},{}\n", fmt17(t.to_f64_lossy()), fmt17(z.re.to_f64_lossy()), fmt17(z.im.to_f64_lossy())));
        }
        out
    }
}

/// Samples `γ_{c,τ}` at `m` equally spaced parameters in `[t0, t1]`, moving
/// each point from `c = 0`.
#[allow(clippy::too_many_arguments)]
pub fn curve_sample<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    tau: &SymbolSequence,
    (t0, t1): (T, T),
    m: usize,
    cfg: &MotionConfig<T>,
    depth: usize,
) -> Result<CurveSample<T>> {
    if m < 2 {
        return Err(Error::InsufficientSamples(format!("a curve needs at least 2 samples, got {m}")));
    }
    if tau.alphabet() != params.q() {
        return Err(Error::Parameter(format!("tau must use {} symbols", params.q())));
    }
    let base = params.with_c(Complex::new(T::zero(), T::zero()));
    let steps = depth + cfg.buffer;
    let span = t1 - t0;
    let last = T::from_usize_lossy(m - 1);
    let samples = (0..m)
        .into_par_iter()
        .map(|i| {
            let t = t0 + span * T::from_usize_lossy(i) / last;
            let orbit = solenoid_orbit(&base, t, tau, steps)?;
            let x = bundle_point_from_orbit(bp, &orbit)?;
            let z = motion_point(bp, &base, params, &x, cfg, depth)?.point.base;
            Ok((t, z))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSample { tau: tau.clone(), c: params.c(), samples, truncation: depth, eps: cfg.eps, lambda: cfg.lambda })
}

/// Smallest distance between samples that are not neighbours in `t`; the
/// curve passes when it exceeds `tol`.
pub fn injectivity_check<T: Real>(curve: &CurveSample<T>, tol: T) -> (bool, T) {
    let pts = curve.points();
    let n = pts.len();
    let min = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = T::infinity();
            for j in i + 2..n {
                best = best.min((pts[i] - pts[j]).norm());
            }
            best
        })
        .reduce(T::infinity, |a, b| a.min(b));
    (min > tol, min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::annulus_bounds;
    use crate::bundle::choose_bundle_params;
    use crate::scalar::cis;
    use std::f64::consts::{PI, TAU};

    type C = Complex<f64>;

    fn setup(p: u32, q: u32) -> (CorrespondenceParams<f64>, BundleParams<f64>, MotionConfig<f64>) {
        let params = CorrespondenceParams::new(p, q, C::new(0.0, 0.0)).unwrap();
        let bp = choose_bundle_params(&params, &annulus_bounds(&params)).unwrap();
        let circle: Vec<C> = (0..64).map(|i| cis(TAU * (i as f64 + 0.5) / 64.0)).collect();
        (params, bp, MotionConfig::estimate(&params, &circle).unwrap())
    }

    #[test]
    fn circle_at_zero() {
        let (p, bp, cfg) = setup(3, 2);
        let tau = SymbolSequence::parse(2, "0").unwrap();
        let curve = curve_sample(&bp, &p, &tau, (0.0, 4.0 * PI), 101, &cfg, 40).unwrap();
        for (t, z) in &curve.samples {
            assert_eq!(*z, cis(*t));
        }
        assert!(curve.to_csv().starts_with("#τ=0,c=0+0i,N=40,"));
    }

    #[test]
    fn full_cover_wraps() {
        let (p, bp, cfg) = setup(3, 2);
        let tau = SymbolSequence::parse(2, "1").unwrap();
        let half = curve_sample(&bp, &p, &tau, (0.0, PI), 100, &cfg, 40).unwrap();
        assert!(injectivity_check(&half, 1e-8).0);
        let full = curve_sample(&bp, &p, &tau, (0.0, 4.0 * PI), 101, &cfg, 40).unwrap();
        assert!(!injectivity_check(&full, 1e-8).0);
    }

    #[test]
    fn small_parameter_stays_close_and_injective() {
        let (p0, bp, cfg) = setup(3, 2);
        let c = C::new(0.01, 0.0);
        let p = p0.with_c(c);
        let tau = SymbolSequence::parse(2, "01").unwrap();
        let curve = curve_sample(&bp, &p, &tau, (0.0, PI / 2.0), 101, &cfg, 40).unwrap();
        for (t, z) in &curve.samples {
            assert!((z - cis(*t)).norm() <= cfg.c0() * c.norm() + 1e-12);
        }
        assert!(curve.samples.windows(2).all(|w| w[0].0 < w[1].0));
        let (ok, min) = injectivity_check(&curve, 1e-8);
        assert!(ok, "{min}");
        assert_eq!(curve.to_csv().lines().count(), 103);
    }

    #[test]
    fn distinct_leaves_give_distinct_curves() {
        let (p0, bp, cfg) = setup(6, 2);
        let p = p0.with_c(C::new(0.0, 0.2));
        let a = curve_sample(&bp, &p, &SymbolSequence::parse(2, "0").unwrap(), (0.0, TAU), 64, &cfg, 40).unwrap();
        let b = curve_sample(&bp, &p, &SymbolSequence::parse(2, "1").unwrap(), (0.0, TAU), 64, &cfg, 40).unwrap();
        let gap = a.samples.iter().zip(&b.samples).map(|(x, y)| (x.1 - y.1).norm()).fold(0.0, f64::max);
        assert!(gap > 1e-3, "{gap}");
        let ann = annulus_bounds(&p);
        for (_, z) in a.samples.iter().chain(&b.samples) {
            assert!(z.norm() > ann.upper_root - cfg.eps && z.norm() < ann.escape_radius + cfg.eps);
        }
    }
}
