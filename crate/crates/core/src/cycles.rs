//! Periodic orbits: exact census at `c = 0`, Newton solves along a branch
//! word, continuation in `c`, and the search for attracting cycles.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::export::{json_num, json_pair};
use crate::orbit::SymbolSequence;
use crate::scalar::{cis, Real};

pub const MAX_NEWTON_ITERATIONS: usize = 50;
pub const DEFAULT_PERIODIC_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    Repelling,
    Attracting,
    /// `|multiplier| = 1` to rounding; neither class applies.
    Indifferent,
}

impl CycleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CycleKind::Repelling => "repelling",
            CycleKind::Attracting => "attracting",
            CycleKind::Indifferent => "indifferent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<T> {
    pub points: Vec<Complex<T>>,
    pub symbols: SymbolSequence,
    pub multiplier: Complex<T>,
    pub kind: CycleKind,
}

impl<T: Real> Cycle<T> {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    fn touches_zero(points: &[Complex<T>]) -> bool {
        let tol = T::lit(T::COLLAPSE_TOL);
        points.iter().any(|z| z.norm() <= tol)
    }

    fn classify(points: &[Complex<T>], multiplier: Complex<T>) -> (Complex<T>, CycleKind) {
        if Self::touches_zero(points) {
            return (Complex::zero(), CycleKind::Attracting);
        }
        let m = multiplier.norm();
        let band = T::lit(T::DEDUP_TOL);
        let kind = if m > T::one() + band {
            CycleKind::Repelling
        } else if m < T::one() - band {
            CycleKind::Attracting
        } else {
            CycleKind::Indifferent
        };
        (multiplier, kind)
    }

    /// Every step `points[i] -> points[i + 1 mod n]` along `symbols[i]`
    /// satisfies the correspondence.
    pub fn validate(&self, params: &CorrespondenceParams<T>) -> Result<()> {
        let n = self.points.len();
        for i in 0..n {
            let z = self.points[i];
            let w = self.points[(i + 1) % n];
            let (res, tol) = params.residual(z, w);
            let img = params.branch_image(z, self.symbols.get(i) as usize)?;
            let close = (img - w).norm() <= T::lit(T::DEDUP_TOL) * T::one().max(w.norm());
            if !(res <= tol) || !close {
                return Err(Error::InvalidPair {
                    z_re: z.re.to_f64_lossy(),
                    z_im: z.im.to_f64_lossy(),
                    w_re: w.re.to_f64_lossy(),
                    w_im: w.im.to_f64_lossy(),
                    residual: res.to_f64_lossy(),
                });
            }
        }
        Ok(())
    }

    /// The same cycle traversed with its shortest repeating block.
    pub fn minimal(&self, params: &CorrespondenceParams<T>) -> Self {
        let n = self.period();
        let tol = T::lit(T::DEDUP_TOL);
        for d in 1..n {
            if n % d != 0 {
                continue;
            }
            let repeats = (0..n).all(|i| {
                self.symbols.get(i) == self.symbols.get(i % d) && (self.points[i] - self.points[i % d]).norm() <= tol
            });
            if !repeats {
                continue;
            }
            let symbols = SymbolSequence::new(self.symbols.alphabet(), self.symbols.symbols()[..d].to_vec())
                .expect("sub-word of a valid word");
            if let Ok((points, _, dphi)) = compose(params, symbols.symbols(), self.points[0]) {
                let (multiplier, kind) = Self::classify(&points, dphi);
                return Self { points, symbols, multiplier, kind };
            }
        }
        self.clone()
    }

    /// Unordered Hausdorff distance between point sets.
    pub fn hausdorff(&self, other: &Self) -> T {
        hausdorff(&self.points, &other.points)
    }

    /// One JSON object: period, symbols, points, multiplier, kind.
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            period: usize,
            symbols: &'a [u32],
            points: Vec<[Box<RawValue>; 2]>,
            multiplier: [Box<RawValue>; 2],
            multiplier_modulus: Box<RawValue>,
            kind: &'static str,
        }
        let line = Line {
            period: self.period(),
            symbols: self.symbols.symbols(),
            points: self.points.iter().map(|&z| json_pair(z)).collect(),
            multiplier: json_pair(self.multiplier),
            multiplier_modulus: json_num(self.multiplier.norm().to_f64_lossy()),
            kind: self.kind.as_str(),
        };
        serde_json::to_string(&line).expect("cycle serializes")
    }
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let one_way = |x: &[Complex<T>], y: &[Complex<T>]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// The roots of `z^(p^n - q^n) = 1`, which contain every period-`n` point of
/// the `c = 0` correspondence. When `gcd(p, q) > 1` some of them are not
/// periodic.
pub fn unit_circle_periodic_points<T: Real>(
    params: &CorrespondenceParams<T>,
    n: u32,
    cap: u128,
) -> Result<Vec<Complex<T>>> {
    if !params.c().is_zero() {
        return Err(Error::Parameter("periodic points in closed form need c = 0".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("period must be at least 1".into()));
    }
    let pn = (params.p() as u128).checked_pow(n);
    let qn = (params.q() as u128).checked_pow(n);
    let count = match (pn, qn) {
        (Some(a), Some(b)) => a - b,
        _ => return Err(Error::CapExceeded { size: u128::MAX, cap }),
    };
    if count > cap {
        return Err(Error::CapExceeded { size: count, cap });
    }
    let m = T::from_usize_lossy(count as usize);
    Ok((0..count as usize)
        .map(|j| cis(T::TAU() * T::from_usize_lossy(j) / m))
        .collect())
}

/// Composes the branches along `symbols` from `z0`, returning the orbit, the
/// final point and the derivative of the composition.
fn compose<T: Real>(
    params: &CorrespondenceParams<T>,
    symbols: &[u32],
    z0: Complex<T>,
) -> Result<(Vec<Complex<T>>, Complex<T>, Complex<T>)> {
    let collapse = T::lit(T::COLLAPSE_TOL);
    let mut z = z0;
    let mut d = Complex::one();
    let mut points = Vec::with_capacity(symbols.len());
    for (step, &k) in symbols.iter().enumerate() {
        if !params.is_integer_beta() && z.norm() < collapse {
            return Err(Error::BranchCollapse { step, modulus: z.norm().to_f64_lossy() });
        }
        points.push(z);
        let (w, dw) = params.branch_jet(z, k as usize)?;
        d = d * dw;
        z = w;
    }
    Ok((points, z, d))
}

/// Newton's method on `Φ(z) - z`, `Φ` the composition of the branches listed
/// in `symbols`.
pub fn cycle_from_symbols<T: Real>(
    params: &CorrespondenceParams<T>,
    symbols: &SymbolSequence,
    seed: Complex<T>,
) -> Result<Cycle<T>> {
    if symbols.is_empty() {
        return Err(Error::Parameter("empty branch word".into()));
    }
    if symbols.alphabet() != params.q() {
        return Err(Error::Parameter(format!(
            "branch word over {} symbols, expected q = {}",
            symbols.alphabet(),
            params.q()
        )));
    }
    let tol = T::lit(T::NEWTON_TOL);
    let mut z = seed;
    let mut last_step = T::infinity();
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (_, phi, dphi) = compose(params, symbols.symbols(), z)?;
        let f = phi - z;
        let denom = dphi - Complex::one();
        if denom.is_zero() {
            break;
        }
        let mut step = f / denom;
        let limit = T::one().max(z.norm());
        if step.norm() > limit {
            step = step * (limit / step.norm());
        }
        z = z - step;
        last_step = step.norm();
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        if last_step <= tol * T::one().max(z.norm()) {
            let (points, phi, dphi) = compose(params, symbols.symbols(), z)?;
            let closure = (phi - z).norm();
            let allowed = T::lit(1e3) * tol * T::one().max(z.norm()) * T::one().max(dphi.norm());
            if closure <= allowed {
                let (multiplier, kind) = Cycle::classify(&points, dphi);
                return Ok(Cycle { points, symbols: symbols.clone(), multiplier, kind });
            }
        }
    }
    Err(Error::NoConvergence { iterations: MAX_NEWTON_ITERATIONS, last_step: last_step.to_f64_lossy() })
}

/// Steps taken by [`continue_cycle`].
#[derive(Debug, Clone, PartialEq)]
pub struct Continuation<T> {
    pub cycle: Cycle<T>,
    pub steps: usize,
    pub halvings: usize,
}

pub const MIN_CONTINUATION_STEP: f64 = 1e-8;
/// Largest pointwise jump accepted in one continuation step.
pub const MAX_CONTINUATION_JUMP: f64 = 0.1;

/// Follows `cycle` along the straight segment from `params_from.c` to
/// `params_to.c`.
pub fn continue_cycle<T: Real>(
    params_from: &CorrespondenceParams<T>,
    params_to: &CorrespondenceParams<T>,
    cycle: &Cycle<T>,
    max_step: T,
) -> Result<Continuation<T>> {
    if params_from.p() != params_to.p() || params_from.q() != params_to.q() {
        return Err(Error::Parameter("continuation must keep p and q fixed".into()));
    }
    if !(max_step > T::zero()) {
        return Err(Error::Parameter("max_step must be positive".into()));
    }
    let c0 = params_from.c();
    let delta = params_to.c() - c0;
    let length = delta.norm();
    if length.is_zero() {
        return Ok(Continuation { cycle: cycle.clone(), steps: 0, halvings: 0 });
    }
    let min_h = T::lit(MIN_CONTINUATION_STEP);
    let jump = T::lit(MAX_CONTINUATION_JUMP);
    let mut s = T::zero();
    let mut h = (max_step / length).min(T::one());
    let mut current = cycle.clone();
    let mut steps = 0;
    let mut halvings = 0;
    while s < T::one() {
        let next_s = (s + h).min(T::one());
        let c = c0 + delta * next_s;
        let params = params_from.with_c(c);
        let attempt = cycle_from_symbols(&params, &current.symbols, current.points[0]).ok().filter(|next| {
            next.kind == current.kind
                && next
                    .points
                    .iter()
                    .zip(&current.points)
                    .all(|(a, b)| (a - b).norm() <= jump)
        });
        match attempt {
            Some(next) => {
                current = next;
                s = next_s;
                steps += 1;
                h = (h * T::lit(2.0)).min(max_step / length);
            }
            None => {
                h = h / T::lit(2.0);
                halvings += 1;
                if h * length < min_h {
                    return Err(Error::ContinuationStuck {
                        re: (c0 + delta * s).re.to_f64_lossy(),
                        im: (c0 + delta * s).im.to_f64_lossy(),
                    });
                }
            }
        }
    }
    Ok(Continuation { cycle: current, steps, halvings })
}

/// The default 16 x 16 seed grid on `[-1, 1]^2`.
pub fn default_seed_grid<T: Real>() -> Vec<Complex<T>> {
    let n = 16;
    let coord = |i: usize| T::lit(-1.0 + 2.0 * i as f64 / (n - 1) as f64);
    (0..n)
        .flat_map(|iy| (0..n).map(move |ix| Complex::new(coord(ix), coord(iy))))
        .collect()
}

/// Attracting cycles of period at most `max_period` reached by Newton from
/// the seeds, reduced to minimal period and deduplicated.
///
/// Output order is by period, then branch word, then seed, independent of
/// the thread count.
pub fn attracting_cycles_search<T: Real>(
    params: &CorrespondenceParams<T>,
    max_period: usize,
    grid: &[Complex<T>],
) -> Result<Vec<Cycle<T>>> {
    if max_period == 0 {
        return Err(Error::Parameter("max_period must be at least 1".into()));
    }
    let mut jobs = Vec::new();
    for n in 1..=max_period {
        for word in SymbolSequence::all_words(params.q(), n) {
            for &seed in grid {
                jobs.push((word.clone(), seed));
            }
        }
    }
    let found: Vec<Option<Cycle<T>>> = jobs
        .par_iter()
        .map(|(word, seed)| {
            cycle_from_symbols(params, word, *seed)
                .ok()
                .filter(|c| c.kind == CycleKind::Attracting)
                .map(|c| c.minimal(params))
        })
        .collect();
    let tol = T::lit(T::DEDUP_TOL);
    let mut out: Vec<Cycle<T>> = Vec::new();
    for cycle in found.into_iter().flatten() {
        if !out.iter().any(|c| c.hausdorff(&cycle) < tol) {
            out.push(cycle);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn params(p: u32, q: u32, c: C) -> CorrespondenceParams<f64> {
        CorrespondenceParams::new(p, q, c).unwrap()
    }

    /// Plain iteration of `w <- c + w^3`, which converges to the attracting
    /// fixed point.
    fn fixed_point_oracle(c: C) -> C {
        let mut w = c;
        for _ in 0..200 {
            w = c + w * w * w;
        }
        w
    }

    #[test]
    fn census_counts() {
        let p = params(3, 2, C::new(0.0, 0.0));
        assert_eq!(unit_circle_periodic_points(&p, 1, DEFAULT_PERIODIC_CAP).unwrap().len(), 1);
        assert_eq!(unit_circle_periodic_points(&p, 2, DEFAULT_PERIODIC_CAP).unwrap().len(), 5);
        let p6 = params(6, 2, C::new(0.0, 0.0));
        let pts = unit_circle_periodic_points(&p6, 1, DEFAULT_PERIODIC_CAP).unwrap();
        assert_eq!(pts.len(), 4);
        for z in pts {
            assert!((z.powi(4) - 1.0).norm() < 1e-12);
        }
        assert!(matches!(
            unit_circle_periodic_points(&p6, 9, DEFAULT_PERIODIC_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(unit_circle_periodic_points(&params(3, 2, C::new(0.1, 0.0)), 1, 10).is_err());
    }

    #[test]
    fn period_two_points_found_by_branch_search() {
        // brute force: each fifth root of unity returns to itself along some
        // two-step branch word
        let p = params(3, 2, C::new(0.0, 0.0));
        for z in unit_circle_periodic_points(&p, 2, DEFAULT_PERIODIC_CAP).unwrap() {
            let back = p
                .images(z)
                .unwrap()
                .into_iter()
                .flat_map(|w| p.images(w).unwrap())
                .any(|v| (v - z).norm() < 1e-12);
            assert!(back, "{z}");
        }
    }

    #[test]
    fn repelling_fixed_point() {
        let p = params(3, 2, C::new(0.0, 0.0));
        let cyc = cycle_from_symbols(&p, &SymbolSequence::zeros(2, 1), C::new(0.9, 0.0)).unwrap();
        assert!((cyc.points[0] - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!((cyc.multiplier - C::new(1.5, 0.0)).norm() < 1e-12);
        assert_eq!(cyc.kind, CycleKind::Repelling);
        cyc.validate(&p).unwrap();
    }

    #[test]
    fn attracting_fixed_point() {
        let c = C::new(0.0, 0.2);
        let p = params(6, 2, c);
        let cyc = cycle_from_symbols(&p, &SymbolSequence::zeros(2, 1), c).unwrap();
        let oracle = fixed_point_oracle(c);
        assert!((cyc.points[0] - oracle).norm() < 1e-12);
        assert!((cyc.points[0] - C::new(0.0, 0.192_829_930_962_912_96)).norm() < 1e-12);
        assert!((cyc.multiplier.norm() - 3.0 * oracle.norm_sqr()).abs() < 1e-12);
        assert!((cyc.multiplier.norm() - 0.112).abs() < 1e-3);
        assert_eq!(cyc.kind, CycleKind::Attracting);
    }

    #[test]
    fn two_cycle_through_zero() {
        let p = params(4, 2, C::new(-1.0, 0.0));
        let cyc = cycle_from_symbols(&p, &SymbolSequence::zeros(2, 2), C::new(0.05, 0.02)).unwrap();
        assert_eq!(cyc.kind, CycleKind::Attracting);
        assert_eq!(cyc.multiplier, C::new(0.0, 0.0));
        assert!(hausdorff(&cyc.points, &[C::new(0.0, 0.0), C::new(-1.0, 0.0)]) < 1e-9);
    }

    #[test]
    fn continuation_examples() {
        let p0 = params(3, 2, C::new(0.0, 0.0));
        let cyc = cycle_from_symbols(&p0, &SymbolSequence::zeros(2, 1), C::new(1.0, 0.0)).unwrap();
        let same = continue_cycle(&p0, &p0, &cyc, 0.01).unwrap();
        assert_eq!(same.cycle, cyc);
        assert_eq!(same.steps, 0);

        let p1 = params(3, 2, C::new(0.01, 0.0));
        let moved = continue_cycle(&p0, &p1, &cyc, 0.002).unwrap();
        let w = moved.cycle.points[0];
        // oracle: Newton on w - 0.01 - w^1.5 on the reals
        let mut x = 1.0f64;
        for _ in 0..60 {
            x -= (x - 0.01 - x.powf(1.5)) / (1.0 - 1.5 * x.sqrt());
        }
        assert!((w - C::new(x, 0.0)).norm() < 1e-9);
        assert!((x - 0.979_689_559_142_879_6).abs() < 1e-9);

        let back = continue_cycle(&p1, &p0, &moved.cycle, 0.002).unwrap();
        assert!(back.cycle.hausdorff(&cyc) < 1e-8);
    }

    #[test]
    fn fixed_points_follow_into_annulus() {
        use crate::correspondence::annulus_bounds;
        use crate::orbit::nearest_branch;
        let p0 = params(6, 2, C::new(0.0, 0.0));
        let p1 = params(6, 2, C::new(0.0, 0.2));
        let b = annulus_bounds(&p1);
        let mut moved = Vec::new();
        for z in unit_circle_periodic_points(&p0, 1, DEFAULT_PERIODIC_CAP).unwrap() {
            let k = nearest_branch(&p0, z, z).unwrap();
            let cyc = cycle_from_symbols(&p0, &SymbolSequence::new(2, vec![k]).unwrap(), z).unwrap();
            let out = continue_cycle(&p0, &p1, &cyc, 0.02).unwrap().cycle;
            assert_eq!(out.kind, CycleKind::Repelling);
            let r = out.points[0].norm();
            // the fixed point iy with y = 0.2 + y^3 sits exactly on |z| = R_c
            assert!(r >= b.upper_root * (1.0 - 1e-12) && r <= b.escape_radius, "{r}");
            moved.push(out.points[0]);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((moved[i] - moved[j]).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn search_examples() {
        let grid = default_seed_grid::<f64>();
        let found = attracting_cycles_search(&params(6, 2, C::new(0.0, 0.0)), 1, &grid).unwrap();
        assert!(found.iter().any(|c| c.period() == 1 && c.points[0].norm() < 1e-9));

        let found = attracting_cycles_search(&params(4, 2, C::new(-1.0, 0.0)), 2, &grid).unwrap();
        let target = [C::new(0.0, 0.0), C::new(-1.0, 0.0)];
        assert!(found.iter().any(|c| hausdorff(&c.points, &target) < 1e-8));
        assert!(found.iter().all(|c| c.kind == CycleKind::Attracting));

        let c = C::new(0.0, 0.2);
        let found = attracting_cycles_search(&params(6, 2, c), 2, &grid).unwrap();
        let oracle = fixed_point_oracle(c);
        assert!(found.iter().any(|cy| cy.period() == 1 && (cy.points[0] - oracle).norm() < 1e-10));
    }

    #[test]
    fn minimal_period_reduction() {
        let p = params(3, 2, C::new(0.0, 0.0));
        let cyc = cycle_from_symbols(&p, &SymbolSequence::zeros(2, 2), C::new(0.97, 0.01)).unwrap();
        assert!((cyc.multiplier.norm() - 2.25).abs() < 1e-9);
        let m = cyc.minimal(&p);
        assert_eq!(m.period(), 1);
        assert!((m.multiplier.norm() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn json_line_fields() {
        let p = params(3, 2, C::new(0.0, 0.0));
        let cyc = cycle_from_symbols(&p, &SymbolSequence::zeros(2, 1), C::new(0.9, 0.0)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cyc.to_json_line()).unwrap();
        assert_eq!(v["period"], 1);
        assert_eq!(v["kind"], "repelling");
        assert_eq!(v["symbols"][0], 0);
        assert!((v["points"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}
