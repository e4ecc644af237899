//! The Cantor bundle: orbits encoded as points `(z, r Σ δ^(n-1) z_n)` of
//! `C^2`, the holomorphic bundle map, the metric `d_s`, and finite-depth
//! sections.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::correspondence::{AnnulusBounds, CorrespondenceParams};
use crate::error::{Error, Result};
use crate::export::{json_num, json_pair};
use crate::orbit::{Direction, OrbitSegment, SymbolSequence};
use crate::scalar::Real;
use crate::spatial::PointGrid;

/// Default truncation depth of the series.
pub const DEFAULT_DEPTH: usize = 40;

/// Scale `r` and ratio `δ` of the series, plus the modulus bound used in tail
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BundleParams<T> {
    pub r: T,
    pub delta: T,
    /// Lower bound on the separation of distinct images and preimages over
    /// the working annulus.
    pub separation: T,
    /// Upper bound on `|z|` over the working set.
    pub radius: T,
}

impl<T: Real> BundleParams<T> {
    pub fn new(r: T, delta: T, radius: T) -> Result<Self> {
        if !(r > T::zero() && delta > T::zero() && delta < T::one() && radius > T::zero()) {
            return Err(Error::Parameter(format!("need r > 0, 0 < delta < 1, radius > 0; got {r}, {delta}, {radius}")));
        }
        Ok(Self { r, delta, separation: T::nan(), radius })
    }

    /// `r δ^n bound / (1 - δ)`.
    pub fn tail(&self, n: usize, bound: T) -> T {
        self.r * self.delta.powi(n as i32) * bound / (T::one() - self.delta)
    }
}

/// `r = 0.95 min(1/sqrt 2, 1/(4|c|))` and `δ = min(1/8, r ρ / 4)` where
/// `ρ = 2 sin(π / max(p, q)) R_c^(p/q)`.
pub fn choose_bundle_params<T: Real>(
    params: &CorrespondenceParams<T>,
    annulus: &AnnulusBounds<T>,
) -> Result<BundleParams<T>> {
    if !annulus.valid {
        return Err(Error::InvalidAnnulus { modulus: params.c().norm().to_f64_lossy() });
    }
    let mut cap = T::one() / T::lit(2.0).sqrt();
    let m = params.c().norm();
    if m > T::zero() {
        cap = cap.min(T::one() / (T::lit(4.0) * m));
    }
    let r = T::lit(0.95) * cap;
    let n = T::lit(params.p().max(params.q()) as f64);
    let separation = T::lit(2.0) * (T::PI() / n).sin() * annulus.upper_root.powf(params.beta_real());
    let delta = T::lit(0.125).min(r * separation / T::lit(4.0));
    Ok(BundleParams { r, delta, separation, radius: annulus.escape_radius })
}

/// A truncated point of the bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint<T> {
    pub base: Complex<T>,
    pub orbit: OrbitSegment<T>,
    pub series: Complex<T>,
    pub tail_bound: T,
    pub direction: Direction,
}

impl<T: Real> BundlePoint<T> {
    /// The point of `C^2`.
    pub fn c2(&self) -> (Complex<T>, Complex<T>) {
        (self.base, self.series)
    }

    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            base: [Box<RawValue>; 2],
            series: [Box<RawValue>; 2],
            tail_bound: Box<RawValue>,
            direction: Direction,
            orbit: Vec<[Box<RawValue>; 2]>,
            symbols: &'a [u32],
        }
        let line = Line {
            base: json_pair(self.base),
            series: json_pair(self.series),
            tail_bound: json_num(self.tail_bound.to_f64_lossy()),
            direction: self.direction,
            orbit: self.orbit.points().iter().map(|&z| json_pair(z)).collect(),
            symbols: self.orbit.symbols(),
        };
        serde_json::to_string(&line).expect("bundle point serializes")
    }
}

/// `r Σ_{n=1..N} δ^(n-1) z_n` with `z_n = points[n]`.
pub fn series_of<T: Real>(bp: &BundleParams<T>, points: &[Complex<T>]) -> Complex<T> {
    // Horner from the far end keeps the small terms from being swamped
    let mut acc = Complex::zero();
    for z in points.iter().skip(1).rev() {
        acc = acc * bp.delta + z;
    }
    acc * bp.r
}

pub fn bundle_point_from_orbit<T: Real>(bp: &BundleParams<T>, orbit: &OrbitSegment<T>) -> Result<BundlePoint<T>> {
    if orbit.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    let series = series_of(bp, orbit.points());
    let bound = bp.radius.max(orbit.max_modulus());
    Ok(BundlePoint {
        base: orbit.base(),
        orbit: orbit.clone(),
        series,
        tail_bound: bp.tail(orbit.len(), bound),
        direction: orbit.direction(),
    })
}

/// Same orbit encoded with different `(r, δ)`.
pub fn reencode<T: Real>(x: &BundlePoint<T>, bp: &BundleParams<T>) -> Result<BundlePoint<T>> {
    bundle_point_from_orbit(bp, &x.orbit)
}

/// The bundle map: shifts `x` one step along its recorded orbit.
pub fn bundle_map<T: Real>(bp: &BundleParams<T>, x: &BundlePoint<T>) -> Result<BundlePoint<T>> {
    if x.orbit.len() < 2 {
        return Err(Error::ShortOrbit { needed: 2, have: x.orbit.len() });
    }
    bundle_point_from_orbit(bp, &x.orbit.shifted()?)
}

/// The branch `φ` used by [`bundle_map_c2`]: forward branch `symbol` or the
/// backward branch with preimage index `symbol`.
fn step_jet<T: Real>(
    params: &CorrespondenceParams<T>,
    direction: Direction,
    symbol: u32,
    z: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    match direction {
        Direction::Forward => params.branch_jet(z, symbol as usize),
        Direction::Backward => {
            let zeta = params.preimage_branch(z, symbol as usize)?;
            // inverse of the forward derivative at zeta
            let d = params.branch_derivative(zeta, z)?;
            Ok((zeta, d.inv()))
        }
    }
}

/// `f(z, w) = (φ(z), w/δ - r φ(z)/δ)` on `C^2`.
pub fn bundle_map_c2<T: Real>(
    params: &CorrespondenceParams<T>,
    bp: &BundleParams<T>,
    direction: Direction,
    symbol: u32,
    (z, w): (Complex<T>, Complex<T>),
) -> Result<(Complex<T>, Complex<T>)> {
    let (phi, _) = step_jet(params, direction, symbol, z)?;
    Ok((phi, (w - phi * bp.r) / bp.delta))
}

/// Jacobian `[[φ', 0], [-r φ'/δ, 1/δ]]` of [`bundle_map_c2`]; its
/// determinant is `φ'/δ`.
pub fn bundle_map_jacobian<T: Real>(
    params: &CorrespondenceParams<T>,
    bp: &BundleParams<T>,
    direction: Direction,
    symbol: u32,
    z: Complex<T>,
) -> Result<[[Complex<T>; 2]; 2]> {
    let (_, d) = step_jet(params, direction, symbol, z)?;
    let inv = T::one() / bp.delta;
    Ok([[d, Complex::zero()], [-d * bp.r * inv, Complex::new(inv, T::zero())]])
}

pub fn det2<T: Real>(m: &[[Complex<T>; 2]; 2]) -> Complex<T> {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn mul2<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let mut out = [[Complex::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `d_s(x, y) = Σ_{n<depth} s^n |x_n - y_n|` and the bound
/// `s^depth 2 s_c / (1 - s)` on the omitted terms.
pub fn metric_ds<T: Real>(
    params: &CorrespondenceParams<T>,
    s: T,
    x: &BundlePoint<T>,
    y: &BundlePoint<T>,
    depth: usize,
) -> Result<(T, T)> {
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Parameter(format!("s must lie in (0, 1), got {s}")));
    }
    if x.direction != y.direction {
        return Err(Error::Parameter("orbits run in different directions".into()));
    }
    let have = x.orbit.points().len().min(y.orbit.points().len());
    if depth > have {
        return Err(Error::Depth { depth, have });
    }
    let mut value = T::zero();
    let mut weight = T::one();
    for (a, b) in x.orbit.points().iter().zip(y.orbit.points()).take(depth) {
        value = value + weight * (a - b).norm();
        weight = weight * s;
    }
    let diam = T::lit(2.0) * params.escape_radius();
    Ok((value, s.powi(depth as i32) * diam / (T::one() - s)))
}

/// Bundle points over a base sample, grouped by their depth-`d` address.
#[derive(Debug, Clone)]
pub struct SectionTable<T> {
    pub depth: usize,
    pub sections: BTreeMap<SymbolSequence, Vec<BundlePoint<T>>>,
    /// Smallest fibre distance between distinct sections over the same base
    /// point.
    pub min_separation: T,
    pub max_tail: T,
    pub separated: bool,
}

pub fn enumerate_sections<T: Real>(
    params: &CorrespondenceParams<T>,
    bp: &BundleParams<T>,
    base: &[Complex<T>],
    depth: usize,
) -> Result<SectionTable<T>> {
    if depth == 0 {
        return Err(Error::Parameter("section depth must be at least 1".into()));
    }
    if base.is_empty() {
        return Err(Error::DegenerateSample("empty base set".into()));
    }
    let words = SymbolSequence::all_words(params.q(), depth);
    let rows: Vec<(SymbolSequence, Vec<BundlePoint<T>>)> = words
        .into_par_iter()
        .map(|word| {
            let pts = base
                .iter()
                .map(|&z| {
                    let orbit = OrbitSegment::forward(params, z, word.symbols())?;
                    bundle_point_from_orbit(bp, &orbit)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((word, pts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut min_separation = T::infinity();
    let mut max_tail = T::zero();
    for i in 0..base.len() {
        for (a, (_, pa)) in rows.iter().enumerate() {
            max_tail = max_tail.max(pa[i].tail_bound);
            for (_, pb) in rows.iter().skip(a + 1) {
                min_separation = min_separation.min((pa[i].series - pb[i].series).norm());
            }
        }
    }
    let separated = rows.len() < 2 || min_separation > T::lit(2.0) * max_tail;
    Ok(SectionTable { depth, sections: rows.into_iter().collect(), min_separation, max_tail, separated })
}

/// A run of points along one branch word, ordered by the arc parameter.
struct Piece<T> {
    word: Vec<u32>,
    ts: Vec<T>,
    zs: Vec<Complex<T>>,
}

/// Points allowed across all pieces before the diagnostic gives up.
pub const MIXING_POINT_CAP: usize = 2_000_000;

/// Least `n <= max_n` such that the `n`-th image of `arc`, kept inside the
/// `ε`-neighbourhood of `lambda`, is an `ε`-net of `lambda`. `arc` is read as
/// an ordered polyline; pieces are refined so consecutive image points stay
/// within `ε/2`.
pub fn mixing_diagnostic<T: Real>(
    params: &CorrespondenceParams<T>,
    lambda: &[Complex<T>],
    arc: &[Complex<T>],
    eps: T,
    max_n: usize,
) -> Option<usize> {
    if lambda.is_empty() || arc.is_empty() {
        return None;
    }
    let target = PointGrid::new(lambda, eps);
    let half = eps / T::lit(2.0);
    let last = T::from_usize_lossy(arc.len() - 1);
    let arc_at = |t: T| -> Complex<T> {
        if arc.len() == 1 {
            return arc[0];
        }
        let s = t * last;
        let i = s.floor().to_usize().unwrap_or(0).min(arc.len() - 2);
        let f = s - T::from_usize_lossy(i);
        arc[i] * (T::one() - f) + arc[i + 1] * f
    };
    let eval = |word: &[u32], t: T| -> Option<Complex<T>> {
        let o = OrbitSegment::forward(params, arc_at(t), word).ok()?;
        Some(*o.points().last().expect("nonempty"))
    };
    let covers = |pieces: &[Piece<T>]| {
        let all: Vec<Complex<T>> = pieces.iter().flat_map(|p| p.zs.iter().copied()).collect();
        let grid = PointGrid::new(&all, eps);
        lambda.iter().all(|&z| grid.any_within(z, eps))
    };
    let ts: Vec<T> = (0..arc.len()).map(|i| T::from_usize_lossy(i) / last.max(T::one())).collect();
    let mut pieces = vec![Piece { word: Vec::new(), ts, zs: arc.to_vec() }];
    let min_gap = T::lit(1e-12);
    for n in 0..=max_n {
        if covers(&pieces) {
            return Some(n);
        }
        if n == max_n {
            break;
        }
        let mut next = Vec::new();
        let mut total = 0usize;
        for piece in &pieces {
            for k in 0..params.q() {
                let mut word = piece.word.clone();
                word.push(k);
                let mut ts = Vec::new();
                let mut zs = Vec::new();
                let mapped: Vec<Option<Complex<T>>> =
                    piece.zs.iter().map(|&z| params.branch_image(z, k as usize).ok()).collect();
                for i in 0..piece.ts.len() {
                    let Some(zi) = mapped[i] else { continue };
                    ts.push(piece.ts[i]);
                    zs.push(zi);
                    if i + 1 < piece.ts.len() {
                        if let Some(zj) = mapped[i + 1] {
                            // bisect the parameter gap until the images are dense
                            let mut stack = vec![(piece.ts[i], zi, piece.ts[i + 1], zj)];
                            let mut fill = Vec::new();
                            while let Some((ta, za, tb, zb)) = stack.pop() {
                                if (za - zb).norm() <= half || tb - ta < min_gap || total + fill.len() > MIXING_POINT_CAP {
                                    continue;
                                }
                                let tm = (ta + tb) / T::lit(2.0);
                                if let Some(zm) = eval(&word, tm) {
                                    fill.push((tm, zm));
                                    stack.push((tm, zm, tb, zb));
                                    stack.push((ta, za, tm, zm));
                                }
                            }
                            fill.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite parameter"));
                            for (t, z) in fill {
                                ts.push(t);
                                zs.push(z);
                            }
                        }
                    }
                }
                // split into runs that stay near lambda
                let mut run = Piece { word: word.clone(), ts: Vec::new(), zs: Vec::new() };
                for (t, z) in ts.into_iter().zip(zs) {
                    if target.any_within(z, eps) {
                        run.ts.push(t);
                        run.zs.push(z);
                    } else if !run.zs.is_empty() {
                        total += run.zs.len();
                        next.push(std::mem::replace(&mut run, Piece { word: word.clone(), ts: Vec::new(), zs: Vec::new() }));
                    }
                }
                if !run.zs.is_empty() {
                    total += run.zs.len();
                    next.push(run);
                }
            }
        }
        if total > MIXING_POINT_CAP || next.is_empty() {
            return None;
        }
        pieces = next;
    }
    None
}
