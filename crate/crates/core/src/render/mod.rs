//! Rasters of Julia sets by bounded-orbit survival, and point clouds of
//! Julia and dual Julia sets by random iteration.

mod image;
mod raster;
mod sample;

pub use image::{points_csv, write_image, write_pgm, write_ppm, write_text};
pub use raster::{annulus_mask, membership_grid, survival_depths, survival_grid};
pub use sample::{dual_ifs_sample, inverse_ifs_sample, DUAL_BURN_IN, MAX_RESTARTS, RESAMPLE_TRIES};

use num_complex::Complex;

use crate::correspondence::AnnulusBounds;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Axis-aligned window onto the plane, sampled at pixel centres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport<T> {
    pub center: Complex<T>,
    pub width: T,
    pub height: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> Viewport<T> {
    pub fn new(center: Complex<T>, width: T, height: T, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Parameter(format!("pixel counts must be positive, got {nx}x{ny}")));
        }
        if !(width > T::zero() && height > T::zero()) {
            return Err(Error::Parameter(format!("viewport extent must be positive, got {width}x{height}")));
        }
        Ok(Self { center, width, height, nx, ny })
    }

    /// Square `n × n` window centred at 0 that holds the disk of radius
    /// `1.1 s_c`.
    pub fn around_annulus(bounds: &AnnulusBounds<T>, n: usize) -> Result<Self> {
        let side = T::lit(2.2) * bounds.escape_radius;
        Self::new(Complex::new(T::zero(), T::zero()), side, side, n, n)
    }

    pub fn pixel_width(&self) -> T {
        self.width / T::from_usize_lossy(self.nx)
    }

    pub fn pixel_height(&self) -> T {
        self.height / T::from_usize_lossy(self.ny)
    }

    fn left(&self) -> T {
        self.center.re - self.width / T::lit(2.0)
    }

    fn top(&self) -> T {
        self.center.im + self.height / T::lit(2.0)
    }

    /// Centre of column `i`, row `j`; row 0 is the top.
    pub fn pixel_center(&self, i: usize, j: usize) -> Complex<T> {
        let half = T::lit(0.5);
        Complex::new(
            self.left() + (T::from_usize_lossy(i) + half) * self.pixel_width(),
            self.top() - (T::from_usize_lossy(j) + half) * self.pixel_height(),
        )
    }

    /// Continuous pixel coordinates: pixel `(i, j)` covers `[i, i+1) × [j, j+1)`.
    pub fn to_pixel_coords(&self, z: Complex<T>) -> (T, T) {
        ((z.re - self.left()) / self.pixel_width(), (self.top() - z.im) / self.pixel_height())
    }

    pub fn pixel_of(&self, z: Complex<T>) -> Option<(usize, usize)> {
        let (u, v) = self.to_pixel_coords(z);
        if u < T::zero() || v < T::zero() {
            return None;
        }
        let (i, j) = (u.floor().to_usize()?, v.floor().to_usize()?);
        (i < self.nx && j < self.ny).then_some((i, j))
    }

    /// Half the pixel diagonal.
    pub fn pixel_radius(&self) -> T {
        self.pixel_width().hypot(self.pixel_height()) / T::lit(2.0)
    }
}

/// One byte per pixel, row-major from the top-left.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid<T> {
    pub viewport: Viewport<T>,
    pub data: Vec<u8>,
    /// False when the surviving pixels carry a uniform expansion
    /// certificate; such renders match the Julia set at pixel scale.
    pub heuristic: bool,
}

impl<T: Real> RasterGrid<T> {
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[j * self.viewport.nx + i]
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&b| b != 0).count()
    }

    /// Number of pixels where exactly one of the two grids is nonzero.
    pub fn hamming(&self, other: &Self) -> usize {
        self.data.iter().zip(&other.data).filter(|(a, b)| (**a != 0) != (**b != 0)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_geometry() {
        let vp = Viewport::new(Complex::new(0.0, 0.0), 2.0, 2.0, 4, 4).unwrap();
        assert_eq!(vp.pixel_center(0, 0), Complex::new(-0.75, 0.75));
        assert_eq!(vp.pixel_of(Complex::new(-0.75, 0.75)), Some((0, 0)));
        assert_eq!(vp.pixel_of(Complex::new(0.9, -0.9)), Some((3, 3)));
        assert_eq!(vp.pixel_of(Complex::new(1.1, 0.0)), None);
        assert!(Viewport::new(Complex::new(0.0, 0.0), 1.0, 1.0, 0, 1).is_err());
    }
}
