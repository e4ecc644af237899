//! The `c = 0` bundle over the unit circle in two guises: the solid-torus
//! system `u_k(e^{it}, z) = (e^{i(qt + 2kπ)/p}, δz + r e^{it})` and the angle
//! maps `θ_k(t) = pt/q + 2πk/q` on the universal cover.
//!
//! Both live in `C^2` through `(t, disk) -> (e^{it}, disk)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::bundle::BundleParams;
use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::export::csv_row;
use crate::orbit::SymbolSequence;
use crate::scalar::{cis, Real};

pub const DEFAULT_CLOUD_CAP: u128 = 20_000_000;

/// A point `(e^{it}, disk)` of the solid torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint<T> {
    pub t: T,
    pub disk: Complex<T>,
}

impl<T: Real> TorusPoint<T> {
    pub fn new(t: T, disk: Complex<T>) -> Result<Self> {
        if disk.norm() > T::one() + T::lit(1e-12) {
            return Err(Error::Parameter(format!("|disk| = {} exceeds 1", disk.norm())));
        }
        Ok(Self { t: reduce_angle(t), disk })
    }

    pub fn c2(&self) -> (Complex<T>, Complex<T>) {
        (cis(self.t), self.disk)
    }
}

/// `t` reduced to `[0, 2π)`.
pub fn reduce_angle<T: Real>(t: T) -> T {
    let tau = T::TAU();
    let r = t - (t / tau).floor() * tau;
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// `θ_k(t) = pt/q + 2πk/q`, not reduced.
pub fn theta<T: Real>(params: &CorrespondenceParams<T>, k: u32, t: T) -> T {
    let q = T::lit(params.q() as f64);
    T::lit(params.p() as f64) * t / q + T::TAU() * T::lit(k as f64) / q
}

/// `u_k`, with the base angle taken in `[0, 2π)`.
pub fn torus_map<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    k: u32,
    x: TorusPoint<T>,
) -> Result<TorusPoint<T>> {
    if bp.r + bp.delta > T::one() {
        return Err(Error::Parameter(format!("r + delta = {} exceeds 1", bp.r + bp.delta)));
    }
    if k >= params.p() {
        return Err(Error::Parameter(format!("torus branch {k} >= p = {}", params.p())));
    }
    Ok(torus_step(bp, params, k, x))
}

fn torus_step<T: Real>(bp: &BundleParams<T>, params: &CorrespondenceParams<T>, k: u32, x: TorusPoint<T>) -> TorusPoint<T> {
    let p = T::lit(params.p() as f64);
    let s = reduce_angle(x.t);
    let t = (T::lit(params.q() as f64) * s + T::TAU() * T::lit(k as f64)) / p;
    TorusPoint { t: reduce_angle(t), disk: x.disk * bp.delta + cis(s) * bp.r }
}

/// `ω^n(cloud)`: every point is replaced by its `p` images, `n` times.
/// Images of one point stay contiguous, in branch order.
pub fn torus_iterate<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    cloud: &[TorusPoint<T>],
    n: usize,
    cap: u128,
) -> Result<Vec<TorusPoint<T>>> {
    if bp.r + bp.delta > T::one() {
        return Err(Error::Parameter(format!("r + delta = {} exceeds 1", bp.r + bp.delta)));
    }
    let size = (params.p() as u128)
        .checked_pow(n as u32)
        .and_then(|m| m.checked_mul(cloud.len() as u128))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let mut current = cloud.to_vec();
    for _ in 0..n {
        current = current
            .par_iter()
            .flat_map_iter(|&x| (0..params.p()).map(move |k| torus_step(bp, params, k, x)))
            .collect();
    }
    Ok(current)
}

/// Angles `a_n = θ_{k_{n-1}} ∘ .. ∘ θ_{k_0}(t)` reduced to `[0, 2π)`, for
/// `n = 0..=depth`.
///
/// The `2πk/q` contributions are accumulated as an exact integer fraction
/// over `q^n`, so the only rounding comes from `(p/q)^n t`.
pub fn theta_angles<T: Real>(params: &CorrespondenceParams<T>, t: T, tau: &SymbolSequence, depth: usize) -> Result<Vec<T>> {
    if tau.len() < depth {
        return Err(Error::ShortSequence { needed: depth, have: tau.len() });
    }
    if tau.alphabet() != params.q() {
        return Err(Error::Parameter(format!("address over {} symbols, expected q = {}", tau.alphabet(), params.q())));
    }
    let p = params.p() as i128;
    let q = params.q() as i128;
    let ratio = T::lit(params.p() as f64) / T::lit(params.q() as f64);
    let mut out = Vec::with_capacity(depth + 1);
    out.push(reduce_angle(t));
    // a_n = ratio^n t + 2π num / q^n; num must not be reduced, since a_{n+1}
    // sees p num / q^(n+1)
    let too_deep = || Error::Parameter("address depth too large".into());
    let mut scaled = t;
    let mut num: i128 = 0;
    let mut den: i128 = 1;
    for n in 0..depth {
        scaled = scaled * ratio;
        num = num
            .checked_mul(p)
            .and_then(|v| v.checked_add(tau.get(n) as i128 * den))
            .ok_or_else(too_deep)?;
        den = den.checked_mul(q).ok_or_else(too_deep)?;
        let frac = T::lit(num.rem_euclid(den) as f64 / den as f64);
        out.push(reduce_angle(reduce_angle(scaled) + T::TAU() * frac));
    }
    Ok(out)
}

/// `g(t, τ)` truncated at depth `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolicPoint<T> {
    pub base: Complex<T>,
    pub series: Complex<T>,
    /// `r δ^N / (1 - δ)`.
    pub tail: T,
}

impl<T: Real> SymbolicPoint<T> {
    pub fn c2(&self) -> (Complex<T>, Complex<T>) {
        (self.base, self.series)
    }
}

pub fn symbolic_point<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    t: T,
    tau: &SymbolSequence,
    depth: usize,
) -> Result<SymbolicPoint<T>> {
    let angles = theta_angles(params, t, tau, depth)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for &a in angles.iter().skip(1).rev() {
        acc = acc * bp.delta + cis(a);
    }
    Ok(SymbolicPoint {
        base: cis(t),
        series: acc * bp.r,
        tail: bp.r * bp.delta.powi(depth as i32) / (T::one() - bp.delta),
    })
}

/// `g(t, τ) - g(t', τ')` in the fibre, summed term by term so identical
/// leading terms cancel exactly.
pub fn series_difference<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    (t, tau): (T, &SymbolSequence),
    (t2, tau2): (T, &SymbolSequence),
    depth: usize,
) -> Result<Complex<T>> {
    let a = theta_angles(params, t, tau, depth)?;
    let b = theta_angles(params, t2, tau2, depth)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(&b).skip(1).rev() {
        let d = if x == y { Complex::new(T::zero(), T::zero()) } else { cis(*x) - cis(*y) };
        acc = acc * bp.delta + d;
    }
    Ok(acc * bp.r)
}

/// Torus branch indices `j_1..j_N` with `u_{j_1} ∘ .. ∘ u_{j_N}(a_N, 0)` equal
/// to `g(t, τ)`, together with the starting angle `a_N`.
pub fn torus_address<T: Real>(
    params: &CorrespondenceParams<T>,
    t: T,
    tau: &SymbolSequence,
    depth: usize,
) -> Result<(T, Vec<u32>)> {
    let angles = theta_angles(params, t, tau, depth)?;
    let p = T::lit(params.p() as f64);
    let q = T::lit(params.q() as f64);
    let mut js = vec![0u32; depth];
    for n in (1..=depth).rev() {
        // a_{n-1} = (q a_n + 2π j) / p mod 2π
        let raw = (angles[n - 1] - q * angles[n] / p) * p / T::TAU();
        let j = raw.round().to_i64().unwrap_or(0).rem_euclid(params.p() as i64);
        js[n - 1] = j as u32;
    }
    Ok((angles[depth], js))
}

/// `u_{word[0]} ∘ .. ∘ u_{word[last]}(x)`.
pub fn torus_apply<T: Real>(
    bp: &BundleParams<T>,
    params: &CorrespondenceParams<T>,
    word: &[u32],
    x: TorusPoint<T>,
) -> Result<TorusPoint<T>> {
    let mut y = x;
    for &k in word.iter().rev() {
        y = torus_map(bp, params, k, y)?;
    }
    Ok(y)
}

/// Componentwise closeness in `C^2`: the computable stand-in for equality in
/// the solenoid quotient.
pub fn quotient_equal<T: Real>(a: (Complex<T>, Complex<T>), b: (Complex<T>, Complex<T>), tol: T) -> bool {
    (a.0 - b.0).norm() <= tol && (a.1 - b.1).norm() <= tol
}

/// Distance `max(|Δbase|, |Δfibre|)` in `C^2`.
pub fn c2_distance<T: Real>(a: (Complex<T>, Complex<T>), b: (Complex<T>, Complex<T>)) -> T {
    (a.0 - b.0).norm().max((a.1 - b.1).norm())
}

/// The address `τ'` with `g(t + 2π, τ') = g(t, τ)`: shifting the lift by a
/// full turn changes every angle by a multiple of `2π/q`, which the symbols
/// absorb with carries.
pub fn deck_shift<T: Real>(params: &CorrespondenceParams<T>, tau: &SymbolSequence, turns: i64) -> SymbolSequence {
    let p = params.p() as i128;
    let q = params.q() as i128;
    let mut m = turns as i128;
    let mut out = Vec::with_capacity(tau.len());
    for &k in tau.symbols() {
        let k = k as i128;
        let k2 = (k - p * m).rem_euclid(q);
        m = (p * m + k2 - k) / q;
        out.push(k2 as u32);
    }
    SymbolSequence::new(params.q(), out).expect("symbols reduced mod q")
}

/// CSV with header `t,disk_re,disk_im`.
pub fn torus_csv<T: Real>(cloud: &[TorusPoint<T>]) -> String {
    let mut s = String::from("t,disk_re,disk_im\n");
    for x in cloud {
        s.push_str(&csv_row(&[x.t.to_f64_lossy(), x.disk.re.to_f64_lossy(), x.disk.im.to_f64_lossy()]));
        s.push('\n');
    }
    s
}

/// CSV with header `z_re,z_im,w_re,w_im` of `C^2` points.
pub fn c2_csv<T: Real>(points: &[(Complex<T>, Complex<T>)]) -> String {
    let mut s = String::from("z_re,z_im,w_re,w_im\n");
    for (z, w) in points {
        s.push_str(&csv_row(&[
            z.re.to_f64_lossy(),
            z.im.to_f64_lossy(),
            w.re.to_f64_lossy(),
            w.im.to_f64_lossy(),
        ]));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{bundle_point_from_orbit, choose_bundle_params};
    use crate::correspondence::annulus_bounds;
    use crate::orbit::{Direction, OrbitSegment};
    use std::f64::consts::{PI, TAU};

    type C = Complex<f64>;

    fn setup() -> (CorrespondenceParams<f64>, BundleParams<f64>) {
        let p = CorrespondenceParams::new(3, 2, C::new(0.0, 0.0)).unwrap();
        let bp = choose_bundle_params(&p, &annulus_bounds(&p)).unwrap();
        (p, bp)
    }

    #[test]
    fn theta_examples() {
        let (p, _) = setup();
        assert_eq!(theta(&p, 0, 0.0), 0.0);
        assert!((theta(&p, 1, 0.0) - PI).abs() < 1e-15);
        assert!((theta(&p, 0, TAU) - 3.0 * PI).abs() < 1e-15);
        for k in 0..2 {
            for &t in &[0.3, 2.0, 5.9, 17.0] {
                let w = cis(theta(&p, k, t));
                assert!((w.powi(2) - cis(t).powi(3)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn torus_map_examples() {
        let (p, bp) = setup();
        let x = torus_map(&bp, &p, 0, TorusPoint::new(0.0, C::new(0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(x.t, 0.0);
        assert!((x.disk - C::new(bp.r, 0.0)).norm() < 1e-15);
        let fixed = TorusPoint::new(0.0, C::new(bp.r / (1.0 - bp.delta), 0.0)).unwrap();
        let y = torus_map(&bp, &p, 0, fixed).unwrap();
        assert!((y.disk - fixed.disk).norm() < 1e-12 && y.t == 0.0);
        let big = BundleParams::new(0.9, 0.2, 1.0).unwrap();
        assert!(torus_map(&big, &p, 0, fixed).is_err());
        for k in 0..3 {
            let z = torus_map(&bp, &p, k, TorusPoint::new(4.0, C::new(0.0, -1.0)).unwrap()).unwrap();
            assert!(z.disk.norm() <= bp.delta + bp.r + 1e-15);
        }
    }

    #[test]
    fn iterate_sizes() {
        let (p, bp) = setup();
        let x = TorusPoint::new(1.0, C::new(0.1, 0.0)).unwrap();
        assert_eq!(torus_iterate(&bp, &p, &[x], 0, DEFAULT_CLOUD_CAP).unwrap(), vec![x]);
        assert_eq!(torus_iterate(&bp, &p, &[x], 1, DEFAULT_CLOUD_CAP).unwrap().len(), 3);
        assert_eq!(torus_iterate(&bp, &p, &[x, x], 4, DEFAULT_CLOUD_CAP).unwrap().len(), 162);
        assert!(matches!(torus_iterate(&bp, &p, &[x], 5, 100), Err(Error::CapExceeded { .. })));
        let fixed = TorusPoint::new(0.0, C::new(bp.r / (1.0 - bp.delta), 0.0)).unwrap();
        let cloud = torus_iterate(&bp, &p, &[fixed], 5, DEFAULT_CLOUD_CAP).unwrap();
        // branch 0 throughout keeps the first element at the fixed point
        assert!((cloud[0].disk - fixed.disk).norm() < 1e-12 && cloud[0].t == 0.0);
    }

    #[test]
    fn symbolic_examples() {
        let (p, bp) = setup();
        let n = 20;
        let zeros = SymbolSequence::zeros(2, n);
        let g = symbolic_point(&bp, &p, 0.0, &zeros, n).unwrap();
        assert!((g.series - C::new(bp.r * (1.0 - bp.delta.powi(n as i32)) / (1.0 - bp.delta), 0.0)).norm() < 1e-15);
        let tau = SymbolSequence::zeros(2, n);
        let mut one = tau.symbols().to_vec();
        one[0] = 1;
        let tau = SymbolSequence::new(2, one).unwrap();
        let a = theta_angles(&p, 0.0, &tau, 3).unwrap();
        assert!((a[1] - PI).abs() < 1e-15);
        assert!((a[2] - 1.5 * PI).abs() < 1e-15);
        assert!(matches!(symbolic_point(&bp, &p, 0.0, &tau, 30), Err(Error::ShortSequence { .. })));

        // agrees with the bundle encoding of the same orbit
        let tau = SymbolSequence::parse(2, "10110100111010001101").unwrap();
        let t = 0.7;
        let g = symbolic_point(&bp, &p, t, &tau, n).unwrap();
        let angles = theta_angles(&p, t, &tau, n).unwrap();
        let orbit = OrbitSegment::from_raw(Direction::Forward, angles.iter().map(|&a| cis(a)).collect(), tau.symbols().to_vec()).unwrap();
        orbit.validate(&p).unwrap();
        let x = bundle_point_from_orbit(&bp, &orbit).unwrap();
        assert!((x.series - g.series).norm() < 1e-12);
    }

    #[test]
    fn deck_shift_matches() {
        let (p, bp) = setup();
        let n = 20;
        let tau = SymbolSequence::parse(2, "01101001100101101001").unwrap();
        let t = 1.3;
        let g = symbolic_point(&bp, &p, t, &tau, n).unwrap();
        let shifted = deck_shift(&p, &tau, 1);
        let h = symbolic_point(&bp, &p, t + TAU, &shifted, n).unwrap();
        assert!(quotient_equal(g.c2(), h.c2(), 2.0 * g.tail + 1e-12));
        // among all first-symbol choices only the carried one matches
        let mut hits = 0;
        for k in 0..2 {
            let mut s = shifted.symbols().to_vec();
            s[0] = k;
            let cand = SymbolSequence::new(2, s).unwrap();
            let h = symbolic_point(&bp, &p, t + TAU, &cand, n).unwrap();
            if quotient_equal(g.c2(), h.c2(), 1e-9) {
                hits += 1;
            }
        }
        assert_eq!(hits, 1);
        assert!(quotient_equal(g.c2(), g.c2(), 0.0));
        let far = symbolic_point(&bp, &p, t + 0.5, &tau, n).unwrap();
        assert!(!quotient_equal(g.c2(), far.c2(), 1e-3));
    }

    #[test]
    fn address_reproduces_symbolic_point() {
        let (p, bp) = setup();
        let n = 20;
        let tau = SymbolSequence::parse(2, "11010010001110101000").unwrap();
        for &t in &[0.0, 0.4, 3.0, 6.2] {
            let g = symbolic_point(&bp, &p, t, &tau, n).unwrap();
            let (a_n, word) = torus_address(&p, t, &tau, n).unwrap();
            let x = torus_apply(&bp, &p, &word, TorusPoint::new(a_n, C::new(0.0, 0.0)).unwrap()).unwrap();
            assert!(c2_distance(g.c2(), x.c2()) < 1e-12);
        }
    }

    #[test]
    fn brute_force_cloud_contains_symbolic_points() {
        let (p, bp) = setup();
        let n = 3;
        let m = 4096;
        let seeds: Vec<TorusPoint<f64>> =
            (0..m).map(|i| TorusPoint::new(TAU * i as f64 / m as f64, C::new(0.0, 0.0)).unwrap()).collect();
        let cloud = torus_iterate(&bp, &p, &seeds, n, DEFAULT_CLOUD_CAP).unwrap();
        let tau = SymbolSequence::parse(2, "101").unwrap();
        let g = symbolic_point(&bp, &p, 2.0, &tau, n).unwrap();
        let best = cloud.iter().map(|x| c2_distance(g.c2(), x.c2())).fold(f64::INFINITY, f64::min);
        // seed spacing 2π/m moves the nearest image by at most that much per
        // coordinate
        assert!(best <= g.tail + TAU / m as f64, "{best}");
    }

    #[test]
    fn csv_headers() {
        let x = TorusPoint::new(0.5, C::new(0.25, 0.0)).unwrap();
        let s = torus_csv(&[x]);
        assert!(s.starts_with("t,disk_re,disk_im\n5.0000000000000000e-1,"));
        assert!(c2_csv(&[x.c2()]).starts_with("z_re,z_im,w_re,w_im\n"));
    }
}
