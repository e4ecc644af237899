//! Survival rendering on the pixel graph.
//!
//! A pixel is a node; it has an edge to every pixel met by the disk that
//! contains the image of its cell under a forward branch (derivative at the
//! centre times the cell radius, with a curvature allowance). A pixel
//! survives `d` steps when its cell meets the fattened annulus and one of
//! its successors survives `d - 1` steps. Every point whose exact orbit
//! stays in the annulus therefore lies in a surviving pixel, so the render
//! is an outer approximation that shrinks monotonically with depth.

use num_complex::Complex;
use rayon::prelude::*;

use super::{RasterGrid, Viewport};
use crate::correspondence::{estimate_expansion, AnnulusBounds, CorrespondenceParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Successor disks wider than this many pixels are not enumerated; the
/// pixel is kept alive instead, which preserves the outer approximation.
const MAX_DISK_PIXELS: f64 = 32.0;

/// Cells of `vp` that meet `{R_c (1 - tol) ≤ |z| ≤ s_c (1 + tol)}`.
pub fn annulus_mask<T: Real>(bounds: &AnnulusBounds<T>, vp: &Viewport<T>, tol: T) -> Vec<bool> {
    let lo = bounds.upper_root * (T::one() - tol);
    let hi = bounds.escape_radius * (T::one() + tol);
    let (pw, ph) = (vp.pixel_width(), vp.pixel_height());
    let half = T::lit(0.5);
    (0..vp.nx * vp.ny)
        .into_par_iter()
        .map(|idx| {
            let c = vp.pixel_center(idx % vp.nx, idx / vp.nx);
            let (min, max) = cell_modulus_range(c, pw * half, ph * half);
            max >= lo && min <= hi
        })
        .collect()
}

/// Smallest and largest `|z|` over the rectangle `c ± (hx, hy)`.
fn cell_modulus_range<T: Real>(c: Complex<T>, hx: T, hy: T) -> (T, T) {
    let gap = |x: T, h: T| (x.abs() - h).max(T::zero());
    let min = gap(c.re, hx).hypot(gap(c.im, hy));
    let max = (c.re.abs() + hx).hypot(c.im.abs() + hy);
    (min, max)
}

struct Edges {
    /// Successor pixel indices.
    succ: Vec<u32>,
    /// Some image may survive outside the viewport or outside the enumerated
    /// region, so the pixel is treated as having a surviving successor.
    open: bool,
}

fn edges<T: Real>(
    params: &CorrespondenceParams<T>,
    vp: &Viewport<T>,
    bounds: &AnnulusBounds<T>,
    tol: T,
    i: usize,
    j: usize,
) -> Edges {
    let z = vp.pixel_center(i, j);
    let rho = vp.pixel_radius();
    let beta = params.beta_real();
    let lo = bounds.upper_root * (T::one() - tol);
    let hi = bounds.escape_radius * (T::one() + tol);
    let (pw, ph) = (vp.pixel_width(), vp.pixel_height());
    let mut out = Edges { succ: Vec::new(), open: false };
    if z.norm() <= T::lit(4.0) * rho {
        // the cell is near the branch point where the derivative bound fails
        out.open = true;
        return out;
    }
    for k in 0..params.q() as usize {
        let Ok((w, dw)) = params.branch_jet(z, k) else {
            out.open = true;
            continue;
        };
        let radius = rho * dw.norm() * (T::one() + T::lit(4.0) * beta * rho / z.norm()) + T::lit(1e-12);
        let m = w.norm();
        if m - radius > hi || m + radius < lo {
            continue;
        }
        let (u, v) = vp.to_pixel_coords(w);
        let (ru, rv) = (radius / pw, radius / ph);
        if ru.max(rv) > T::lit(MAX_DISK_PIXELS) {
            out.open = true;
            continue;
        }
        let nx = T::from_usize_lossy(vp.nx);
        let ny = T::from_usize_lossy(vp.ny);
        if u - ru < T::zero() || v - rv < T::zero() || u + ru > nx || v + rv > ny {
            out.open = true;
        }
        let clampi = |x: T, n: usize| x.floor().max(T::zero()).min(T::from_usize_lossy(n - 1)).to_usize().unwrap_or(0);
        let (i0, i1) = (clampi(u - ru, vp.nx), clampi(u + ru, vp.nx));
        let (j0, j1) = (clampi(v - rv, vp.ny), clampi(v + rv, vp.ny));
        for jj in j0..=j1 {
            for ii in i0..=i1 {
                // distance from the disk centre to the cell, in plane units
                let gx = (T::from_usize_lossy(ii) - u).max(u - T::from_usize_lossy(ii + 1)).max(T::zero()) * pw;
                let gy = (T::from_usize_lossy(jj) - v).max(v - T::from_usize_lossy(jj + 1)).max(T::zero()) * ph;
                if gx.hypot(gy) <= radius {
                    out.succ.push((jj * vp.nx + ii) as u32);
                }
            }
        }
    }
    out
}

/// For each pixel, the largest `d ≤ depth` it survives, or `-1` when its
/// cell misses the annulus.
pub fn survival_depths<T: Real>(
    params: &CorrespondenceParams<T>,
    vp: &Viewport<T>,
    depth: usize,
    bounds: &AnnulusBounds<T>,
    tol: T,
) -> Result<Vec<i32>> {
    if !bounds.valid {
        return Err(Error::InvalidAnnulus { modulus: params.c().norm().to_f64_lossy() });
    }
    if depth == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    let mask = annulus_mask(bounds, vp, tol);
    let graph: Vec<Option<Edges>> = mask
        .par_iter()
        .enumerate()
        .map(|(idx, &inside)| inside.then(|| edges(params, vp, bounds, tol, idx % vp.nx, idx / vp.nx)))
        .collect();
    let mut depths: Vec<i32> = mask.iter().map(|&m| if m { 0 } else { -1 }).collect();
    let mut alive = mask;
    for d in 1..=depth {
        let next: Vec<bool> = graph
            .par_iter()
            .map(|e| match e {
                Some(e) => e.open || e.succ.iter().any(|&s| alive[s as usize]),
                None => false,
            })
            .collect();
        let stable = next == alive;
        for (dep, &a) in depths.iter_mut().zip(&next) {
            if a {
                *dep = d as i32;
            }
        }
        alive = next;
        if stable {
            // a fixed point of the recursion survives every further depth
            for (dep, &a) in depths.iter_mut().zip(&alive) {
                if a {
                    *dep = depth as i32;
                }
            }
            break;
        }
    }
    Ok(depths)
}

fn certify<T: Real>(params: &CorrespondenceParams<T>, vp: &Viewport<T>, data: &[u8]) -> bool {
    let alive: Vec<Complex<T>> = data
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 255)
        .map(|(idx, _)| vp.pixel_center(idx % vp.nx, idx / vp.nx))
        .collect();
    if alive.is_empty() {
        return false;
    }
    let stride = (alive.len() / 2000).max(1);
    let sample: Vec<_> = alive.into_iter().step_by(stride).collect();
    estimate_expansion(params, &sample, T::lit(1e-9)).map(|e| e.expanding()).unwrap_or(false)
}

/// 255 where the pixel survives `depth` steps, 0 elsewhere.
pub fn membership_grid<T: Real>(
    params: &CorrespondenceParams<T>,
    vp: &Viewport<T>,
    depth: usize,
    bounds: &AnnulusBounds<T>,
    tol: T,
) -> Result<RasterGrid<T>> {
    let depths = survival_depths(params, vp, depth, bounds, tol)?;
    let data: Vec<u8> = depths.iter().map(|&d| if d == depth as i32 { 255 } else { 0 }).collect();
    let heuristic = !certify(params, vp, &data);
    Ok(RasterGrid { viewport: *vp, data, heuristic })
}

/// Like [`membership_grid`], with partial survivors shaded by the fraction
/// of `depth` they reach.
pub fn survival_grid<T: Real>(
    params: &CorrespondenceParams<T>,
    vp: &Viewport<T>,
    depth: usize,
    bounds: &AnnulusBounds<T>,
    tol: T,
) -> Result<RasterGrid<T>> {
    let depths = survival_depths(params, vp, depth, bounds, tol)?;
    let data: Vec<u8> = depths
        .iter()
        .map(|&d| match d {
            d if d == depth as i32 => 255,
            d if d <= 0 => 0,
            d => (1 + (d as usize * 253) / depth) as u8,
        })
        .collect();
    let mut full = data.clone();
    full.iter_mut().for_each(|b| *b = if *b == 255 { 255 } else { 0 });
    let heuristic = !certify(params, vp, &full);
    Ok(RasterGrid { viewport: *vp, data, heuristic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::annulus_bounds;

    type C = Complex<f64>;

    fn setup(c: C, n: usize) -> (CorrespondenceParams<f64>, AnnulusBounds<f64>, Viewport<f64>) {
        let p = CorrespondenceParams::new(6, 2, c).unwrap();
        let b = annulus_bounds(&p);
        let vp = Viewport::around_annulus(&b, n).unwrap();
        (p, b, vp)
    }

    #[test]
    fn spot_pixels_at_zero() {
        let (p, b, _) = setup(C::new(0.0, 0.0), 1);
        // a tiny viewport centred on each probe point
        let probe = |z: C| {
            let vp = Viewport::new(z, 1e-3, 1e-3, 1, 1).unwrap();
            membership_grid(&p, &vp, 24, &b, 0.01).unwrap().data[0]
        };
        assert_eq!(probe(C::new(1.0, 0.0)), 255);
        assert_eq!(probe(C::new(0.5, 0.0)), 0);
        assert_eq!(probe(C::new(1.5, 0.0)), 0);
    }

    #[test]
    fn band_at_zero_is_thin() {
        let (p, b, vp) = setup(C::new(0.0, 0.0), 128);
        let g = membership_grid(&p, &vp, 24, &b, 0.01).unwrap();
        assert!(!g.heuristic);
        let h = vp.pixel_width();
        for j in 0..vp.ny {
            for i in 0..vp.nx {
                let d = (vp.pixel_center(i, j).norm() - 1.0).abs();
                if g.get(i, j) != 0 {
                    assert!(d <= 2.5 * h, "{i},{j}: {d}");
                }
                if d <= 0.5 * h {
                    assert_eq!(g.get(i, j), 255, "{i},{j}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_depth_and_inside_annulus() {
        let (p, b, vp) = setup(C::new(0.0, 0.2), 96);
        let tol = 0.01;
        let mut prev: Option<RasterGrid<f64>> = None;
        for depth in [1, 2, 4, 8] {
            let g = membership_grid(&p, &vp, depth, &b, tol).unwrap();
            if let Some(prev) = &prev {
                assert!(g.data.iter().zip(&prev.data).all(|(a, b)| *a == 0 || *b != 0));
            }
            prev = Some(g);
        }
        let g = prev.unwrap();
        let slack = vp.pixel_radius();
        for (idx, &v) in g.data.iter().enumerate() {
            if v != 0 {
                let r = vp.pixel_center(idx % vp.nx, idx / vp.nx).norm();
                assert!(r >= b.upper_root * (1.0 - tol) - slack && r <= b.escape_radius * (1.0 + tol) + slack);
            }
        }
        let shaded = survival_grid(&p, &vp, 8, &b, tol).unwrap();
        assert!(shaded.data.iter().zip(&g.data).all(|(s, m)| (*s == 255) == (*m == 255)));
        assert!(shaded.data.iter().any(|&v| v != 0 && v != 255));
    }
}
