use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use corrdyn::bundle::{bundle_point_from_orbit, choose_bundle_params};
use corrdyn::cycles::DEFAULT_PERIODIC_CAP;
use corrdyn::export::{complex_string, json_pair};
use corrdyn::motion::{
    conjugacy_defect, curve_dilatation, curve_sample, holomorphy_residual, lipschitz_ratio, solenoid_orbit,
};
use corrdyn::render::{
    dual_ifs_sample, inverse_ifs_sample, membership_grid, points_csv, survival_grid, write_image, write_text,
};
use corrdyn::rng::SplitMix64;
use corrdyn::scalar::cis;
use corrdyn::solenoid::{c2_csv, symbolic_point, torus_csv, torus_iterate};
use corrdyn::{
    annulus_bounds, attracting_cycles_search, continue_cycle, cycle_from_symbols, unit_circle_periodic_points,
    Complex64, Error, MotionConfig, Params, SymbolSequence, TorusPoint, Viewport,
};
use serde_json::json;

use crate::cache::Cache;
use crate::{parse_complex, setup_threads, Common};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Out = Result<u8, CliError>;

fn params(common: &Common) -> Result<Params, CliError> {
    setup_threads(common);
    Ok(Params::new(common.p, common.q, common.c)?)
}

/// Writes to `path`, or to standard output when there is none.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(write_text(p, text)?),
        None => {
            if !text.is_empty() {
                say!("{}", text.trim_end_matches('\n'));
            }
            Ok(())
        }
    }
}

fn motion_config(zero: &Params) -> Result<MotionConfig, CliError> {
    let circle: Vec<Complex64> = (0..64).map(|i| cis(TAU * (i as f64 + 0.5) / 64.0)).collect();
    Ok(MotionConfig::estimate(zero, &circle)?)
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub common: Common,
    /// Pixels per side.
    #[arg(long, default_value_t = 512)]
    pub size: usize,
    #[arg(long, default_value_t = 24)]
    pub depth: usize,
    /// Relative fattening of the annulus.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long, default_value = "0+0i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub center: Complex64,
    /// Side of the square window; default 2.2 s_c.
    #[arg(long)]
    pub extent: Option<f64>,
    /// Shade partial survivors by how deep they reach.
    #[arg(long)]
    pub shade: bool,
    /// Image path; `.ppm` gives colour PPM, anything else PGM. Metadata goes
    /// to the same path with `.json` appended.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn render_julia(a: &RenderArgs) -> Out {
    let params = params(&a.common)?;
    let bounds = annulus_bounds(&params);
    if !bounds.valid {
        return Err(Error::InvalidAnnulus { modulus: params.c().norm() }.into());
    }
    let side = a.extent.unwrap_or(2.2 * bounds.escape_radius);
    let vp = Viewport::new(a.center, side, side, a.size, a.size)?;
    let grid = if a.shade {
        survival_grid(&params, &vp, a.depth, &bounds, a.tol)?
    } else {
        membership_grid(&params, &vp, a.depth, &bounds, a.tol)?
    };
    write_image(&grid, &a.out)?;
    let meta = json!({
        "p": params.p(),
        "q": params.q(),
        "c": json_pair(params.c()),
        "depth": a.depth,
        "tol": a.tol,
        "center": json_pair(a.center),
        "extent": side,
        "size": a.size,
        "surviving": grid.data.iter().filter(|&&b| b == 255).count(),
        "heuristic": grid.heuristic,
    });
    let mut meta_path = a.out.clone().into_os_string();
    meta_path.push(".json");
    write_text(Path::new(&meta_path), &format!("{meta}\n"))?;
    say!(
        "{}: {}x{} pixels, {} surviving at depth {}, heuristic={}",
        a.out.display(),
        a.size,
        a.size,
        grid.count_nonzero(),
        a.depth,
        grid.heuristic
    );
    Ok(0)
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub burn_in: usize,
    /// CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn sample_julia(a: &SampleArgs) -> Out {
    let params = params(&a.common)?;
    let pts = inverse_ifs_sample(&params, a.n, a.burn_in, a.common.seed, &annulus_bounds(&params))?;
    emit(a.out.as_deref(), &points_csv(&pts))?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct DualArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Longest cycle period searched for.
    #[arg(long, default_value_t = 4)]
    pub max_period: usize,
    /// CSV path for the points; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON-lines path for attracting cycles; standard output when absent.
    #[arg(long)]
    pub cycles_out: Option<PathBuf>,
}

pub fn dual_julia(a: &DualArgs) -> Out {
    let params = params(&a.common)?;
    let pts = dual_ifs_sample(&params, a.n, a.common.seed)?;
    emit(a.out.as_deref(), &points_csv(&pts))?;
    let found = attracting_cycles_search(&params, a.max_period, &corrdyn::cycles::default_seed_grid())?;
    let lines: String = found.iter().map(|c| c.to_json_line() + "\n").collect();
    emit(a.cycles_out.as_deref(), &lines)?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: Common,
}

pub fn bounds(a: &BoundsArgs) -> Out {
    let params = params(&a.common)?;
    let b = annulus_bounds(&params);
    say!(
        "r_c={:.10} R_c={:.10} s_c={:.10} valid={}",
        b.lower_root, b.upper_root, b.escape_radius, b.valid
    );
    Ok(0)
}

#[derive(Args, Debug)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub period: u32,
    /// Solve along this branch word directly instead of taking the census.
    #[arg(long)]
    pub symbols: Option<String>,
    /// Newton start for `--symbols`.
    #[arg(long, default_value = "1+0i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub start: Complex64,
    /// Continuation step in c.
    #[arg(long, default_value_t = 0.02)]
    pub step: f64,
    /// JSON-lines cache of continued cycles.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

pub fn cycles(a: &CyclesArgs) -> Out {
    let params = params(&a.common)?;
    if let Some(word) = &a.symbols {
        let word = SymbolSequence::parse(params.q(), word)?;
        say!("{}", cycle_from_symbols(&params, &word, a.start)?.to_json_line());
        return Ok(0);
    }
    let zero = params.with_c(Complex64::new(0.0, 0.0));
    let mut cache = a.cache.as_deref().map(Cache::open).transpose()?;
    for z in unit_circle_periodic_points(&zero, a.period, DEFAULT_PERIODIC_CAP)? {
        let Some(base) = SymbolSequence::all_words(zero.q(), a.period as usize)
            .iter()
            .filter_map(|w| cycle_from_symbols(&zero, w, z).ok())
            .find(|cyc| (cyc.points[0] - z).norm() <= 1e-8)
        else {
            // not periodic with this period
            continue;
        };
        if params.c() == zero.c() {
            say!("{}", base.to_json_line());
            continue;
        }
        let syms = base.symbols.symbols().to_vec();
        let cached = cache.as_ref().and_then(|c| c.lookup(params.p(), params.q(), params.c(), &syms, z)).cloned();
        let (from_c, from) = match cached {
            Some(e) if e.c == params.c() => {
                say!("{}", e.cycle_json);
                continue;
            }
            Some(e) => (e.c, cycle_from_symbols(&params.with_c(e.c), &base.symbols, e.start)?),
            None => (zero.c(), base),
        };
        let cont = continue_cycle(&params.with_c(from_c), &params, &from, a.step)?;
        say!("{}", cont.cycle.to_json_line());
        if let Some(cache) = cache.as_mut() {
            cache.append(params.p(), params.q(), params.c(), z, &cont.cycle, from_c, cont.steps)?;
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct SolenoidArgs {
    #[command(flatten)]
    pub common: Common,
    /// Iterations of the solid-torus map, or truncation of the symbolic point.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Seed points `(2πj/m, 0)` of the torus cloud.
    #[arg(long, default_value_t = 16)]
    pub seeds: usize,
    /// Largest cloud the torus iteration may produce.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u128,
    /// Base angle; with `--tau`, export one symbolic point instead.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Address digits, padded with zeros.
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn solenoid(a: &SolenoidArgs) -> Out {
    let params = params(&a.common)?;
    if params.c() != Complex64::new(0.0, 0.0) {
        return Err(CliError::Usage("the solenoid lives at c = 0".into()));
    }
    let bp = choose_bundle_params(&params, &annulus_bounds(&params))?;
    let text = match (a.t, &a.tau) {
        (Some(t), Some(tau)) => {
            let tau = SymbolSequence::parse(params.q(), tau)?.padded(a.depth);
            c2_csv(&[symbolic_point(&bp, &params, t, &tau, a.depth)?.c2()])
        }
        (None, None) => {
            let cloud = (0..a.seeds)
                .map(|j| TorusPoint::new(TAU * j as f64 / a.seeds as f64, Complex64::new(0.0, 0.0)))
                .collect::<corrdyn::Result<Vec<_>>>()?;
            torus_csv(&torus_iterate(&bp, &params, &cloud, a.depth, a.cap)?)
        }
        _ => return Err(CliError::Usage("--t and --tau go together".into())),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Address digits, padded with zeros.
    #[arg(long, default_value = "0")]
    pub tau: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 400)]
    pub m: usize,
    /// Truncation of the moved bundle points.
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn curve(a: &CurveArgs) -> Out {
    let params = params(&a.common)?;
    let zero = params.with_c(Complex64::new(0.0, 0.0));
    let bp = choose_bundle_params(&zero, &annulus_bounds(&zero))?;
    let cfg = motion_config(&zero)?;
    let tau = SymbolSequence::parse(params.q(), &a.tau)?;
    let curve = curve_sample(&bp, &params, &tau, (a.t0, a.t1), a.m, &cfg, a.depth)?;
    emit(a.out.as_deref(), &curve.to_csv())?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct MotionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Random bundle points on the circle.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    /// Stencil spacing of the holomorphy residual.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Curve samples for the dilatation estimate.
    #[arg(long, default_value_t = 400)]
    pub m: usize,
}

pub fn motion_check(a: &MotionArgs) -> Out {
    let params = params(&a.common)?;
    let zero = params.with_c(Complex64::new(0.0, 0.0));
    let bp = choose_bundle_params(&zero, &annulus_bounds(&zero))?;
    let cfg = motion_config(&zero)?;
    let mut rng = SplitMix64::new(a.common.seed);
    let steps = a.depth + cfg.buffer + 1;
    let mut xs = Vec::with_capacity(a.points);
    for _ in 0..a.points {
        let tau = SymbolSequence::new(zero.q(), (0..steps).map(|_| rng.below(zero.q() as u64) as u32).collect())?;
        xs.push(bundle_point_from_orbit(&bp, &solenoid_orbit(&zero, rng.uniform(0.0, TAU), &tau, steps)?)?);
    }
    let c = params.c();
    let radius = c.norm().max(1e-3);
    let grid: Vec<Complex64> = (0..5)
        .flat_map(|i| (0..5).map(move |j| Complex64::new(i as f64 - 2.0, j as f64 - 2.0) * (radius / (2.0 * 2f64.sqrt()))))
        .collect();
    let (mut holo, mut lip, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for x in &xs {
        holo = holo.max(holomorphy_residual(&bp, &zero, x, c, a.h, &cfg, a.depth)?);
        lip = lip.max(lipschitz_ratio(&bp, &zero, x, &grid, &cfg, a.depth)?);
        conj = conj.max(conjugacy_defect(&bp, &zero, &params, x, &cfg, a.depth)?);
    }
    let tau0 = SymbolSequence::zeros(zero.q(), 1);
    let k = curve_dilatation(&curve_sample(&bp, &params, &tau0, (0.0, FRAC_PI_2), a.m, &cfg, a.depth)?, &[1, 2, 4])?;
    let holo_tol = 1e-4 * (a.h / 1e-3).powi(2);
    let rows = [
        ("holomorphy_residual", holo, holo_tol, holo <= holo_tol),
        ("lipschitz_ratio", lip, cfg.c0(), lip <= cfg.c0()),
        ("conjugacy_defect", conj, 1e-8, conj <= 1e-8),
        ("curve_dilatation", k, 1.5, (1.0 - 1e-9..=1.5).contains(&k)),
    ];
    say!("c={} lambda={:.6} eps={:.6} C0={:.6}", complex_string(c), cfg.lambda, cfg.eps, cfg.c0());
    for (name, value, tol, ok) in rows {
        say!("{} {name}={value:.6e} bound={tol:.3e}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(if rows.iter().all(|r| r.3) { 0 } else { 1 })
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
}

pub fn verify(a: &VerifyArgs) -> Out {
    let params = params(&a.common)?;
    let report = corrdyn::verify::run_suite(params.p(), params.q(), params.c(), a.common.seed)?;
    for check in &report.checks {
        say!("{check}");
    }
    let failed = report.failures().count();
    say!("{} checks, {failed} failed", report.checks.len());
    Ok(if report.passed() { 0 } else { 1 })
}
