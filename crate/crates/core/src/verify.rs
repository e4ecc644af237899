//! The invariant suite run by `corrdyn verify`.
//!
//! Each check returns pass, fail or skip with a one-line detail. A check that
//! hits an error fails with the error text.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::bundle::{
    bundle_map, bundle_point_from_orbit, choose_bundle_params, metric_ds, reencode, series_of, BundleParams,
};
use crate::correspondence::{annulus_bounds, estimate_expansion, AnnulusBounds, CorrespondenceParams};
use crate::cycles::{continue_cycle, cycle_from_symbols, unit_circle_periodic_points, CycleKind, DEFAULT_PERIODIC_CAP};
use crate::error::Result;
use crate::motion::{
    curve_dilatation, curve_sample, injectivity_check, lipschitz_ratio, motion_point, round_trip_error, shadow_orbit,
    solenoid_orbit, MotionConfig,
};
use crate::orbit::{Direction, OrbitSegment, SymbolSequence};
use crate::render::{annulus_mask, inverse_ifs_sample, membership_grid, Viewport};
use crate::rng::SplitMix64;
use crate::scalar::cis;
use crate::solenoid::{c2_distance, series_difference, symbolic_point, theta, torus_address, torus_apply, TorusPoint};

type C = Complex<f64>;
type P = CorrespondenceParams<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        write!(f, "{tag} {}/{}: {}", self.module, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    fn run(&mut self, module: &'static str, name: &'static str, probe: impl FnOnce() -> Result<(Outcome, String)>) {
        let (outcome, detail) = probe().unwrap_or_else(|e| (Outcome::Fail, format!("error: {e}")));
        self.checks.push(Check { module, name, outcome, detail });
    }
}

fn verdict(ok: bool, detail: String) -> Result<(Outcome, String)> {
    Ok((if ok { Outcome::Pass } else { Outcome::Fail }, detail))
}

fn skip(why: &str) -> Result<(Outcome, String)> {
    Ok((Outcome::Skip, why.to_string()))
}

fn random_points(rng: &mut SplitMix64, n: usize, lo: f64, hi: f64) -> Vec<C> {
    (0..n).map(|_| cis(rng.uniform(-PI, PI)) * rng.uniform(lo, hi)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// A forward orbit of `steps` steps ending at `end`, built by pulling `end`
/// back along random preimages.
fn pulled_orbit(params: &P, end: C, steps: usize, rng: &mut SplitMix64) -> Result<OrbitSegment<f64>> {
    let word: Vec<u32> = (0..steps).map(|_| rng.below(params.p() as u64) as u32).collect();
    OrbitSegment::backward(params, end, &word)?.reversed(params)
}

/// Target parameter for the motion checks: `c` itself when it is small,
/// otherwise a small parameter in its direction.
fn motion_target(c: C, cfg: &MotionConfig<f64>) -> C {
    let m = c.norm();
    if m == 0.0 {
        C::new(0.0, 0.5 * cfg.u_radius)
    } else if m <= 0.05 {
        c
    } else {
        c * (0.05 / m)
    }
}

/// Runs every invariant for `(p, q, c)`; `seed` drives all random sampling.
pub fn run_suite(p: u32, q: u32, c: C, seed: u64) -> Result<Report> {
    let params = P::new(p, q, c)?;
    let zero = params.with_c(C::zero());
    let bounds = annulus_bounds(&params);
    let mut report = Report::default();
    let mut rng = SplitMix64::new(seed);

    core_checks(&mut report, &params, &bounds, &mut rng);
    cycle_checks(&mut report, &params, &zero);
    if bounds.valid {
        bundle_checks(&mut report, &params, &bounds, &mut rng)?;
    } else {
        for name in ["reconstruction", "semi_conjugacy", "reencode_round_trip", "metric_contraction"] {
            report.run("bundle", name, || skip("annulus bounds do not exist at this c"));
        }
    }
    solenoid_checks(&mut report, &zero, &mut rng)?;
    motion_checks(&mut report, &params, &zero, &mut rng)?;
    render_checks(&mut report, &params, &bounds, seed)?;
    Ok(report)
}

fn core_checks(report: &mut Report, params: &P, bounds: &AnnulusBounds<f64>, rng: &mut SplitMix64) {
    let zs = random_points(rng, 200, 0.5, 2.0);
    report.run("corr_core", "image_preimage_duality", || {
        let mut worst = 0.0f64;
        for &z in &zs {
            let scale = z.norm().max(1.0);
            for w in params.images(z)? {
                let d = params.preimages(w)?.iter().map(|x| (x - z).norm()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d / scale);
            }
            for zeta in params.preimages(z)? {
                let d = params.images(zeta)?.iter().map(|x| (x - z).norm()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d / scale);
            }
        }
        verdict(worst <= 1e-9, format!("max set-matching distance {worst:.3e} (tol 1e-9)"))
    });
    report.run("corr_core", "translation_identity", || {
        let shift = C::new(0.1, -0.05);
        let other = params.with_c(params.c() + shift);
        let mut worst = 0.0f64;
        for &w in &zs {
            let a = params.preimages(w)?;
            let b = other.preimages(w + shift)?;
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).norm() / x.norm().max(1.0));
            }
        }
        verdict(worst <= 1e-12, format!("max elementwise difference {worst:.3e} (tol 1e-12)"))
    });
    report.run("corr_core", "derivative_vs_finite_difference", || {
        let h = 1e-6;
        let mut worst = 0.0f64;
        for (i, &z) in zs.iter().enumerate() {
            if z.arg().abs() > PI - 1e-3 {
                continue;
            }
            let k = i % params.q() as usize;
            let w = params.branch_image(z, k)?;
            let d = params.branch_derivative(z, w)?;
            let fd = (params.branch_image(z + h, k)? - params.branch_image(z - h, k)?) / (2.0 * h);
            worst = worst.max((d - fd).norm() / d.norm());
        }
        verdict(worst < 1e-6, format!("max relative error {worst:.3e} (tol 1e-6)"))
    });
    report.run("corr_core", "image_separation", || {
        let mut worst = f64::INFINITY;
        for &z in &zs {
            let imgs = params.images(z)?;
            let want = 2.0 * (PI / params.q() as f64).sin() * z.norm().powf(params.beta_real()) - 1e-9;
            for a in 0..imgs.len() {
                for b in a + 1..imgs.len() {
                    worst = worst.min((imgs[a] - imgs[b]).norm() - want);
                }
            }
        }
        if params.q() == 1 {
            return verdict(true, "a single image".into());
        }
        verdict(worst >= 0.0, format!("min excess separation {worst:.3e}"))
    });
    report.run("corr_core", "escape_invariance", || {
        let s = bounds.escape_radius;
        let mut ok = true;
        for z in random_points(rng, 200, s * (1.0 + 1e-6), 3.0 * s) {
            ok &= params.images(z)?.iter().all(|w| w.norm() > z.norm());
        }
        verdict(ok, format!("200 points beyond s_c = {s:.6}"))
    });
}

fn census(zero: &P, n: u32) -> Result<Vec<(C, crate::cycles::Cycle<f64>)>> {
    let mut found = Vec::new();
    let words = SymbolSequence::all_words(zero.q(), n as usize);
    for z in unit_circle_periodic_points(zero, n, DEFAULT_PERIODIC_CAP)? {
        for w in &words {
            if let Ok(cyc) = cycle_from_symbols(zero, w, z) {
                if (cyc.points[0] - z).norm() <= 1e-8 {
                    found.push((z, cyc));
                    break;
                }
            }
        }
    }
    Ok(found)
}

fn cycle_checks(report: &mut Report, params: &P, zero: &P) {
    let small = |n: u32| (zero.p() as u64).pow(n) <= 4096;
    report.run("cycles", "census_at_zero", || {
        let coprime = num_integer_gcd(zero.p(), zero.q()) == 1;
        let mut detail = Vec::new();
        let mut ok = true;
        for n in 1..=2u32 {
            if !small(n) {
                continue;
            }
            let roots = unit_circle_periodic_points(zero, n, DEFAULT_PERIODIC_CAP)?.len();
            let found = census(zero, n)?;
            let want = (zero.p() as f64 / zero.q() as f64).powi(n as i32);
            let mult_ok = found.iter().all(|(_, cyc)| rel(cyc.multiplier.norm(), want) <= 1e-9);
            ok &= mult_ok && !found.is_empty() && (!coprime || found.len() == roots);
            detail.push(format!("n={n}: {}/{} realized", found.len(), roots));
        }
        verdict(ok, detail.join(", "))
    });
    report.run("cycles", "cycles_validate", || {
        let mut count = 0;
        for (_, cyc) in census(zero, 1)? {
            cyc.validate(zero)?;
            count += 1;
        }
        verdict(count > 0, format!("{count} cycles pass the per-step residual check"))
    });
    report.run("cycles", "continuation_reversible", || {
        let target = if params.c().is_zero() { params.with_c(C::new(0.0, 0.01)) } else { *params };
        let mut worst = 0.0f64;
        let mut count = 0;
        for (_, cyc) in census(zero, 1)?.into_iter().take(8) {
            let there = continue_cycle(zero, &target, &cyc, 0.02)?.cycle;
            there.validate(&target)?;
            let back = continue_cycle(&target, zero, &there, 0.02)?.cycle;
            for (a, b) in back.points.iter().zip(&cyc.points) {
                worst = worst.max((a - b).norm());
            }
            count += 1;
        }
        verdict(worst <= 1e-8, format!("{count} fixed points, max return error {worst:.3e} (tol 1e-8)"))
    });
    report.run("cycles", "zero_forces_attracting", || {
        let basilica = P::new(4, 2, C::new(-1.0, 0.0))?;
        let cyc = cycle_from_symbols(&basilica, &SymbolSequence::new(2, vec![0, 0])?, C::zero())?;
        verdict(
            cyc.kind == CycleKind::Attracting && cyc.points.iter().any(|z| z.norm() <= 1e-9),
            format!("2-cycle through 0 and {:.6} classified {}", cyc.points[1].re, cyc.kind.as_str()),
        )
    });
}

fn num_integer_gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn bundle_checks(report: &mut Report, params: &P, bounds: &AnnulusBounds<f64>, rng: &mut SplitMix64) -> Result<()> {
    let bp = choose_bundle_params(params, bounds)?;
    let julia = inverse_ifs_sample(params, 20, 50, rng.next_u64(), bounds)?;
    let orbits: Vec<_> = julia.iter().map(|&e| pulled_orbit(params, e, 45, rng)).collect::<Result<_>>()?;
    report.run("bundle", "reconstruction", || {
        let mut worst = 0.0f64;
        let mut ok = true;
        for o in &orbits {
            let x = bundle_point_from_orbit(&bp, o)?;
            let mut bases = vec![x.base];
            let mut y = x.clone();
            while y.orbit.len() >= 2 {
                y = bundle_map(&bp, &y)?;
                bases.push(y.base);
            }
            bases.push(y.orbit.points()[1]);
            let err = (series_of(&bp, &bases) - x.series).norm();
            worst = worst.max(err);
            ok &= err <= x.tail_bound + 1e-12;
        }
        verdict(ok, format!("max rebuild error {worst:.3e}"))
    });
    report.run("bundle", "semi_conjugacy", || {
        let mut ok = true;
        for o in &orbits {
            // replay branches known to stay near the Julia set
            let word = &o.symbols()[..10];
            let x = bundle_point_from_orbit(&bp, &OrbitSegment::forward(params, o.base(), word)?)?;
            ok &= bundle_map(&bp, &x)?.base == params.branch_image(x.base, word[0] as usize)?;
        }
        verdict(ok, "projection of the image is the recorded branch image, exactly".into())
    });
    report.run("bundle", "reencode_round_trip", || {
        let other = BundleParams::new(bp.r * 0.5, bp.delta * 0.5, bp.radius)?;
        let mut ok = true;
        for o in &orbits {
            let x = bundle_point_from_orbit(&bp, o)?;
            let y = reencode(&reencode(&x, &other)?, &bp)?;
            ok &= y.base == x.base && y.orbit == x.orbit && (y.series - x.series).norm() <= x.tail_bound + y.tail_bound;
        }
        verdict(ok, format!("{} points through (r/2, δ/2) and back", orbits.len()))
    });
    report.run("bundle", "metric_contraction", || {
        let s = 0.5;
        let lambda = estimate_expansion(params, &julia, 1e-9)?.backward_max;
        if lambda >= 1.0 {
            return skip("backward branches do not contract on the sample");
        }
        let factor = lambda * (1.0 - s) + s;
        let depth = 20;
        let mut worst = 0.0f64;
        for &z in &julia {
            let word: Vec<u32> = (0..=depth).map(|_| rng.below(params.p() as u64) as u32).collect();
            let x = OrbitSegment::backward(params, z, &word)?;
            // follow the same local branches from a nearby base point
            let mut ys = vec![z + cis(rng.uniform(-PI, PI)) * 1e-4];
            for i in 0..depth {
                let pre = params.preimages(ys[i])?;
                let next = x.points()[i + 1];
                let best = pre.into_iter().min_by(|a, b| (a - next).norm().total_cmp(&(b - next).norm())).expect("p >= 1");
                ys.push(best);
            }
            let syms = vec![0; depth];
            let y = OrbitSegment::from_raw(Direction::Backward, ys, syms)?;
            let x = x.truncated(depth);
            let bx = bundle_point_from_orbit(&bp, &x)?;
            let by = bundle_point_from_orbit(&bp, &y)?;
            let (before, _) = metric_ds(params, s, &bx, &by, depth)?;
            let (after, tail) = metric_ds(params, s, &bundle_map(&bp, &bx)?, &bundle_map(&bp, &by)?, depth - 1)?;
            let _ = tail;
            worst = worst.max(after / (factor * before));
        }
        verdict(worst <= 1.0, format!("max ratio to (λ(1-s)+s) d_s = {worst:.4} with λ = {lambda:.4}"))
    });
    Ok(())
}

fn solenoid_checks(report: &mut Report, zero: &P, rng: &mut SplitMix64) -> Result<()> {
    let bp = choose_bundle_params(zero, &annulus_bounds(zero))?;
    let q = zero.q();
    let depth = 20;
    let random_tau = |rng: &mut SplitMix64| {
        SymbolSequence::new(q, (0..depth).map(|_| rng.below(q as u64) as u32).collect()).expect("symbols below q")
    };
    report.run("solenoid", "exponential_consistency", || {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let t = rng.uniform(0.0, TAU);
            let k = rng.below(q as u64) as u32;
            let lhs = cis(theta(zero, k, t)).powu(q);
            let rhs = cis(t).powu(zero.p());
            worst = worst.max((lhs - rhs).norm());
        }
        verdict(worst <= 1e-12, format!("max |e^(iqθ) - e^(ipt)| = {worst:.3e}"))
    });
    report.run("solenoid", "cross_construction", || {
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..100 {
            let t = rng.uniform(0.0, TAU);
            let tau = random_tau(rng);
            let g = symbolic_point(&bp, zero, t, &tau, depth)?;
            let (a_n, word) = torus_address(zero, t, &tau, depth)?;
            let x = torus_apply(&bp, zero, &word, TorusPoint::new(a_n, C::zero())?)?;
            let d = c2_distance(g.c2(), x.c2());
            worst = worst.max(d);
            ok &= d <= g.tail + 1e-12;
        }
        verdict(ok, format!("100 points, max distance to their ω^N element {worst:.3e}"))
    });
    report.run("solenoid", "injectivity", || {
        let tail = bp.r * bp.delta.powi(depth as i32) / (1.0 - bp.delta);
        let mut ok = true;
        let mut closest = f64::INFINITY;
        for i in 0..200 {
            let t = rng.uniform(0.0, TAU);
            let tau = random_tau(rng);
            // half of the pairs share the base angle
            let t2 = if i % 2 == 0 { t } else { rng.uniform(0.0, TAU) };
            let tau2 = random_tau(rng);
            if t == t2 && tau == tau2 {
                continue;
            }
            let base = (cis(t) - cis(t2)).norm();
            let fibre = series_difference(&bp, zero, (t, &tau), (t2, &tau2), depth)?.norm();
            let d = base.max(fibre);
            closest = closest.min(d);
            ok &= d > 2.0 * tail;
        }
        verdict(ok, format!("closest pair {closest:.3e} vs combined tails {:.3e}", 2.0 * tail))
    });
    Ok(())
}

fn motion_checks(report: &mut Report, params: &P, zero: &P, rng: &mut SplitMix64) -> Result<()> {
    let circle: Vec<C> = (0..64).map(|i| cis(TAU * (i as f64 + 0.5) / 64.0)).collect();
    let cfg = MotionConfig::estimate(zero, &circle)?;
    let bp = choose_bundle_params(zero, &annulus_bounds(zero))?;
    let target = motion_target(params.c(), &cfg);
    let tp = zero.with_c(target);
    let depth = 40;
    let steps = depth + cfg.buffer + 1;
    let mut points = Vec::new();
    for _ in 0..8 {
        let tau = SymbolSequence::new(zero.q(), (0..8).map(|_| rng.below(zero.q() as u64) as u32).collect())?;
        let o = solenoid_orbit(zero, rng.uniform(0.0, TAU), &tau, steps)?;
        points.push(bundle_point_from_orbit(&bp, &o)?);
    }
    let note = format!("target c = {}", crate::export::complex_string(target));
    report.run("motion", "base_identity", || {
        let mut ok = true;
        for x in &points {
            let m = motion_point(&bp, zero, zero, x, &cfg, depth)?;
            ok &= m.point == bundle_point_from_orbit(&bp, &x.orbit.truncated(depth))?;
        }
        verdict(ok, "h at the base parameter is the identity, exactly".into())
    });
    report.run("motion", "inverse_property", || {
        let bound = 2.0 * cfg.lambda.powi(cfg.buffer as i32) * cfg.eps;
        let mut worst = 0.0f64;
        for x in &points {
            worst = worst.max(round_trip_error(zero, &tp, &x.orbit, &cfg, depth)?);
        }
        verdict(worst <= bound, format!("{note}: max round-trip error {worst:.3e} (bound {bound:.3e})"))
    });
    report.run("motion", "lipschitz_bound", || {
        let radius = target.norm().min(0.02);
        let grid: Vec<C> = (0..3)
            .flat_map(|a| (0..3).map(move |b| C::new(radius * (a as f64 - 1.0), radius * (b as f64 - 1.0)) / 2f64.sqrt()))
            .collect();
        let mut worst = 0.0f64;
        for x in points.iter().take(4) {
            worst = worst.max(lipschitz_ratio(&bp, zero, x, &grid, &cfg, depth)?);
        }
        verdict(worst <= cfg.c0() + 1e-9, format!("max ratio {worst:.4} vs C0 = {:.4}", cfg.c0()))
    });
    report.run("motion", "shadow_proximity", || {
        let step = C::new(0.0, 0.5 * cfg.u_radius);
        let v = zero.with_c(step);
        let mut worst = 0.0f64;
        for x in &points {
            worst = worst.max(shadow_orbit(zero, &v, &x.orbit, &cfg)?.max_drift);
        }
        let bound = cfg.c0() * step.norm();
        verdict(
            worst <= bound + 1e-12 && bound < cfg.eps / 3.0,
            format!("max drift {worst:.3e} <= C0|Δc| = {bound:.3e} < ε/3 = {:.3e}", cfg.eps / 3.0),
        )
    });
    let tau0 = SymbolSequence::zeros(zero.q(), 1);
    report.run("motion", "sector_injectivity", || {
        let curve = curve_sample(&bp, &tp, &tau0, (0.0, FRAC_PI_2), 100, &cfg, depth)?;
        let (ok, min) = injectivity_check(&curve, 1e-8);
        verdict(ok, format!("{note}: min non-adjacent gap {min:.3e} on [0, π/2]"))
    });
    report.run("motion", "dilatation_decreases", || {
        let k0 = curve_dilatation(&curve_sample(&bp, zero, &tau0, (0.0, FRAC_PI_2), 200, &cfg, depth)?, &[1, 2, 4])?;
        let mut ks = Vec::new();
        for k in 0..4 {
            let c = target * 0.5f64.powi(k);
            let curve = curve_sample(&bp, &zero.with_c(c), &tau0, (0.0, FRAC_PI_2), 200, &cfg, depth)?;
            ks.push(curve_dilatation(&curve, &[1, 2, 4])?);
        }
        let monotone = ks.windows(2).all(|w| w[1] <= w[0] * 1.05);
        let ok = monotone && (k0 - 1.0).abs() <= 1e-9 && ks.iter().all(|&k| k >= 1.0 - 1e-9);
        verdict(ok, format!("K at c/2^k: {ks:.4?}; K at 0: {k0:.12}"))
    });
    Ok(())
}

fn render_checks(report: &mut Report, params: &P, bounds: &AnnulusBounds<f64>, seed: u64) -> Result<()> {
    let n = 128;
    let tol = 0.01;
    if !bounds.valid {
        for name in ["survivors_in_annulus", "depth_monotone", "samples_survive"] {
            report.run("render", name, || skip("annulus bounds do not exist at this c"));
        }
    } else {
        let vp = Viewport::around_annulus(bounds, n)?;
        report.run("render", "survivors_in_annulus", || {
            let g = membership_grid(params, &vp, 12, bounds, tol)?;
            let slack = vp.pixel_radius();
            let ok = g.data.iter().enumerate().all(|(idx, &v)| {
                let r = vp.pixel_center(idx % n, idx / n).norm();
                v == 0 || (r >= bounds.upper_root * (1.0 - tol) - slack && r <= bounds.escape_radius * (1.0 + tol) + slack)
            });
            verdict(ok && g.count_nonzero() > 0, format!("{} surviving pixels at depth 12", g.count_nonzero()))
        });
        report.run("render", "depth_monotone", || {
            let a = membership_grid(params, &vp, 6, bounds, tol)?;
            let b = membership_grid(params, &vp, 12, bounds, tol)?;
            let ok = b.data.iter().zip(&a.data).all(|(x, y)| *x == 0 || *y != 0);
            verdict(ok, format!("{} -> {} pixels from depth 6 to 12", a.count_nonzero(), b.count_nonzero()))
        });
        report.run("render", "samples_survive", || {
            let g = membership_grid(params, &vp, 12, bounds, tol)?;
            let pts = inverse_ifs_sample(params, 1000, 50, seed, bounds)?;
            let missing = pts.iter().filter(|&&z| vp.pixel_of(z).is_none_or(|(i, j)| g.get(i, j) == 0)).count();
            verdict(missing == 0, format!("{missing} of 1000 Julia samples in dead pixels"))
        });
    }
    report.run("render", "circle_ground_truth", || {
        let zero = params.with_c(C::zero());
        let b0 = annulus_bounds(&zero);
        let vp = Viewport::around_annulus(&b0, n)?;
        let g = membership_grid(&zero, &vp, 24, &b0, tol)?;
        let circle = AnnulusBounds { lower_root: 0.0, upper_root: 1.0, escape_radius: 1.0, valid: true };
        let mask = annulus_mask(&circle, &vp, 0.0);
        let (extra, missing) = band_mismatch(&g.data, &mask, n, n);
        verdict(extra == 0 && missing == 0, format!("{extra} survivors beyond one pixel of the circle, {missing} circle pixels dead"))
    });
    Ok(())
}

/// Survivors farther than one pixel (chessboard) from the mask, and mask
/// pixels that do not survive.
pub fn band_mismatch(data: &[u8], mask: &[bool], nx: usize, ny: usize) -> (usize, usize) {
    let near = |i: usize, j: usize| {
        let (i0, i1) = (i.saturating_sub(1), (i + 1).min(nx - 1));
        let (j0, j1) = (j.saturating_sub(1), (j + 1).min(ny - 1));
        (j0..=j1).any(|jj| (i0..=i1).any(|ii| mask[jj * nx + ii]))
    };
    let mut extra = 0;
    let mut missing = 0;
    for j in 0..ny {
        for i in 0..nx {
            let idx = j * nx + i;
            if data[idx] != 0 && !near(i, j) {
                extra += 1;
            }
            if mask[idx] && data[idx] == 0 {
                missing += 1;
            }
        }
    }
    (extra, missing)
}
