//! Multivalued arithmetic for the correspondence `(w - c)^q = z^p`.
//!
//! Every `z != 0` has `q` images and every `w != c` has `p` preimages. Branches
//! are labelled with the principal argument `Arg z` in `(-pi, pi]`:
//!
//! ```text
//! w_k = c + exp((p/q) (ln|z| + i Arg z) + 2 pi i k / q),   k = 0..q-1
//! ζ_j =     exp((q/p) (ln|w - c| + i Arg(w - c)) + 2 pi i j / p),   j = 0..p-1
//! ```
//!
//! These labels are the discrete addresses used by cycles, bundles, the
//! solenoid and the shadowing routines, so they must never change.

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots;
use crate::scalar::{cis, Real};

/// The triple `(p, q, c)` defining `(w - c)^q = z^p`.
///
/// `p` and `q` need not be coprime; the exponent `p/q` is kept as an exact
/// rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondenceParams<T> {
    p: u32,
    q: u32,
    c: Complex<T>,
    beta: Ratio<u32>,
}

impl<T: Real> CorrespondenceParams<T> {
    pub fn new(p: u32, q: u32, c: Complex<T>) -> Result<Self> {
        if q < 1 || p <= q {
            return Err(Error::Parameter(format!("need p > q >= 1, got p={p}, q={q}")));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Parameter("c must be finite".into()));
        }
        Ok(Self { p, q, c, beta: Ratio::new(p, q) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn c(&self) -> Complex<T> {
        self.c
    }

    /// Same `(p, q)` with a different parameter `c`.
    pub fn with_c(&self, c: Complex<T>) -> Self {
        Self { c, ..*self }
    }

    /// The exponent `p/q`, reduced.
    pub fn beta(&self) -> Ratio<u32> {
        self.beta
    }

    pub fn beta_real(&self) -> T {
        T::lit(self.beta.to_f64().expect("finite ratio"))
    }

    /// `p/q - 1`.
    pub fn gamma(&self) -> T {
        self.beta_real() - T::one()
    }

    /// True when `q` divides `p`; the branches are then entire polynomials
    /// `c + e^{2 pi i k/q} z^(p/q)` and `z = 0` is not a branch point.
    pub fn is_integer_beta(&self) -> bool {
        self.beta.is_integer()
    }

    /// `s_c = (1 + |c|)^(1/gamma)`: outside `|z| <= s_c` every image is larger
    /// in modulus than its source.
    pub fn escape_radius(&self) -> T {
        (T::one() + self.c.norm()).powf(T::one() / self.gamma())
    }

    /// Residual `|(w - c)^q - z^p|` and the scale-aware threshold it is
    /// compared against.
    pub fn residual(&self, z: Complex<T>, w: Complex<T>) -> (T, T) {
        let lhs = (w - self.c).powi(self.q as i32);
        let rhs = z.powi(self.p as i32);
        let scale = T::one().max(z.norm().powi(self.p as i32));
        ((lhs - rhs).norm(), T::lit(T::RESIDUAL_TOL) * scale)
    }

    /// True if `z -> w` is a step of the correspondence within tolerance.
    pub fn satisfies(&self, z: Complex<T>, w: Complex<T>) -> bool {
        let (res, tol) = self.residual(z, w);
        res <= tol
    }

    fn image_modulus(&self, z: Complex<T>) -> Result<T> {
        let m = (self.beta_real() * z.norm().ln()).exp();
        if !m.is_finite() {
            return Err(Error::Overflow { modulus: z.norm().to_f64_lossy() });
        }
        Ok(m)
    }

    fn branch_point(what: &'static str, z: Complex<T>) -> Error {
        Error::BranchPoint { what, re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() }
    }

    /// All `q` images of `z`, in branch order. At `z = 0` with integer `p/q`
    /// the single value `c` is returned.
    pub fn images(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Overflow { modulus: f64::INFINITY });
        }
        if z.is_zero() {
            return if self.is_integer_beta() {
                Ok(vec![self.c])
            } else {
                Err(Self::branch_point("images at z = 0", z))
            };
        }
        let m = self.image_modulus(z)?;
        let base = self.beta_real() * z.arg();
        let turn = T::TAU() / T::lit(self.q as f64);
        Ok((0..self.q)
            .map(|k| self.c + cis(base + turn * T::lit(k as f64)) * m)
            .collect())
    }

    /// All `p` solutions `ζ` of `ζ^p = (w - c)^q`, in branch order.
    pub fn preimages(&self, w: Complex<T>) -> Result<Vec<Complex<T>>> {
        let u = w - self.c;
        if u.is_zero() {
            return Err(Self::branch_point("preimages at w = c", w));
        }
        if !(u.re.is_finite() && u.im.is_finite()) {
            return Err(Error::Overflow { modulus: f64::INFINITY });
        }
        let inv = T::lit(self.q as f64) / T::lit(self.p as f64);
        let m = (inv * u.norm().ln()).exp();
        let base = inv * u.arg();
        let turn = T::TAU() / T::lit(self.p as f64);
        Ok((0..self.p).map(|j| cis(base + turn * T::lit(j as f64)) * m).collect())
    }

    /// The `k`-th forward branch at `z`.
    pub fn branch_image(&self, z: Complex<T>, k: usize) -> Result<Complex<T>> {
        if k >= self.q as usize {
            return Err(Error::Parameter(format!("branch index {k} >= q = {}", self.q)));
        }
        if z.is_zero() {
            return if self.is_integer_beta() {
                Ok(self.c)
            } else {
                Err(Self::branch_point("branch at z = 0", z))
            };
        }
        let m = self.image_modulus(z)?;
        let angle = self.beta_real() * z.arg() + T::TAU() * T::lit(k as f64) / T::lit(self.q as f64);
        Ok(self.c + cis(angle) * m)
    }

    /// The `j`-th backward branch at `w`.
    pub fn preimage_branch(&self, w: Complex<T>, j: usize) -> Result<Complex<T>> {
        if j >= self.p as usize {
            return Err(Error::Parameter(format!("preimage index {j} >= p = {}", self.p)));
        }
        let u = w - self.c;
        if u.is_zero() {
            return Err(Self::branch_point("preimages at w = c", w));
        }
        let inv = T::lit(self.q as f64) / T::lit(self.p as f64);
        let m = (inv * u.norm().ln()).exp();
        let angle = inv * u.arg() + T::TAU() * T::lit(j as f64) / T::lit(self.p as f64);
        Ok(cis(angle) * m)
    }

    /// Derivative `(p/q)(w - c)/z` of the branch through `z -> w`.
    pub fn branch_derivative(&self, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
        if z.is_zero() {
            return Err(Self::branch_point("derivative at z = 0", z));
        }
        let (res, tol) = self.residual(z, w);
        if !(res <= tol) {
            return Err(Error::InvalidPair {
                z_re: z.re.to_f64_lossy(),
                z_im: z.im.to_f64_lossy(),
                w_re: w.re.to_f64_lossy(),
                w_im: w.im.to_f64_lossy(),
                residual: res.to_f64_lossy(),
            });
        }
        Ok((w - self.c) * self.beta_real() / z)
    }

    /// Value and derivative of branch `k` at `z`. In integer mode the
    /// derivative at `z = 0` is the polynomial one.
    pub fn branch_jet(&self, z: Complex<T>, k: usize) -> Result<(Complex<T>, Complex<T>)> {
        let w = self.branch_image(z, k)?;
        if z.is_zero() {
            // integer mode only; branch_image already rejected the other case
            let d = if self.beta.to_integer() == 1 {
                cis(T::TAU() * T::lit(k as f64) / T::lit(self.q as f64))
            } else {
                Complex::zero()
            };
            return Ok((w, d));
        }
        Ok((w, (w - self.c) * self.beta_real() / z))
    }
}

/// The radii of the annulus that contains the Julia set.
///
/// `lower_root < upper_root` are the two zeros of `g_c(x) = x^(p/q) - x + |c|`
/// on `(0, 1)` and `escape_radius = (1 + |c|)^(1/(p/q - 1))`. At `c = 0` the
/// annulus degenerates to the unit circle (`0, 1, 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusBounds<T> {
    pub lower_root: T,
    pub upper_root: T,
    pub escape_radius: T,
    pub valid: bool,
}

impl<T: Real> AnnulusBounds<T> {
    /// `|z|` lies in `[upper_root, escape_radius]` widened relatively by `tol`.
    pub fn contains(&self, z: Complex<T>, tol: T) -> bool {
        let r = z.norm();
        r >= self.upper_root * (T::one() - tol) && r <= self.escape_radius * (T::one() + tol)
    }
}

/// `g_c(x) = x^(p/q) - x + |c|`.
pub fn annulus_function<T: Real>(params: &CorrespondenceParams<T>, x: T) -> T {
    x.powf(params.beta_real()) - x + params.c().norm()
}

pub fn annulus_bounds<T: Real>(params: &CorrespondenceParams<T>) -> AnnulusBounds<T> {
    let escape_radius = params.escape_radius();
    if params.c().is_zero() {
        return AnnulusBounds { lower_root: T::zero(), upper_root: T::one(), escape_radius, valid: true };
    }
    let eps = T::lit(1e-12);
    let tol = T::lit(T::ROOT_TOL);
    let roots = roots::scan_roots(|x| annulus_function(params, x), eps, T::one() - eps, 1024, tol);
    match roots.as_slice() {
        [lo, hi] => AnnulusBounds { lower_root: *lo, upper_root: *hi, escape_radius, valid: true },
        _ => AnnulusBounds {
            lower_root: T::nan(),
            upper_root: T::nan(),
            escape_radius,
            valid: false,
        },
    }
}

/// Extremes of `|φ'|` over a sample set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionEstimate<T> {
    /// Minimum over samples and forward branches of `|φ'|`.
    pub forward_min: T,
    /// Maximum over samples and backward branches of `|φ'|`.
    pub backward_max: T,
}

impl<T: Real> ExpansionEstimate<T> {
    /// Euclidean certificate of uniform expansion on the sample.
    pub fn expanding(&self) -> bool {
        self.forward_min > T::one()
    }
}

pub fn estimate_expansion<T: Real>(
    params: &CorrespondenceParams<T>,
    samples: &[Complex<T>],
    radius: T,
) -> Result<ExpansionEstimate<T>> {
    if samples.is_empty() {
        return Err(Error::DegenerateSample("empty sample set".into()));
    }
    let beta = params.beta_real();
    let mut forward_min = T::infinity();
    let mut backward_max = T::zero();
    for &z in samples {
        if z.norm() < radius || (z - params.c()).norm() < radius {
            return Err(Error::DegenerateSample(format!(
                "sample ({}, {}) within {} of 0 or c",
                z.re, z.im, radius
            )));
        }
        for w in params.images(z)? {
            let d = params.branch_derivative(z, w)?.norm();
            forward_min = forward_min.min(d);
        }
        for zeta in params.preimages(z)? {
            // inverse of the forward branch zeta -> z
            let d = zeta.norm() / (beta * (z - params.c()).norm());
            backward_max = backward_max.max(d);
        }
    }
    Ok(ExpansionEstimate { forward_min, backward_max })
}

/// Minimum pairwise distance between distinct images and between distinct
/// preimages over a sample set.
pub fn branch_separation<T: Real>(params: &CorrespondenceParams<T>, samples: &[Complex<T>]) -> Result<T> {
    let mut sep = T::infinity();
    let mut scan = |pts: &[Complex<T>]| {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                sep = sep.min((pts[i] - pts[j]).norm());
            }
        }
    };
    for &z in samples {
        scan(&params.images(z)?);
        scan(&params.preimages(z)?);
    }
    Ok(sep)
}

/// Greatest real root of `x^d - x - 1`, which lies in `(1, 2)` for `d >= 2`.
pub fn multibrot_escape_root<T: Real>(d: u32) -> Result<T> {
    if d < 2 {
        return Err(Error::Parameter(format!("need d >= 2, got {d}")));
    }
    roots::bisect(|x: T| x.powi(d as i32) - x - T::one(), T::one(), T::lit(2.0), T::lit(T::ROOT_TOL) * T::lit(1e-2))
        .ok_or_else(|| Error::Parameter("no sign change on (1, 2)".into()))
}

/// The parameters `ω` with `ω^(d-1) = -1`, for which `0 -> c -> 0` is a
/// 2-cycle of `(w - c)^2 = z^(2d)`.
pub fn superattracting_centers<T: Real>(d: u32) -> Result<Vec<Complex<T>>> {
    if d < 2 {
        return Err(Error::Parameter(format!("need d >= 2, got {d}")));
    }
    let m = T::lit((d - 1) as f64);
    Ok((0..d - 1)
        .map(|j| cis(T::PI() * T::lit((2 * j + 1) as f64) / m))
        .collect())
}
