use std::fs;
use std::path::Path;

use num_complex::Complex;

use super::RasterGrid;
use crate::error::{Error, Result};
use crate::scalar::{fmt17, Real};

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Binary greyscale PGM: `P5\n{nx} {ny}\n255\n` then one byte per pixel.
pub fn write_pgm(path: &Path, nx: usize, ny: usize, data: &[u8]) -> Result<()> {
    if data.len() != nx * ny {
        return Err(Error::Parameter(format!("{} bytes for a {nx}x{ny} image", data.len())));
    }
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.extend_from_slice(data);
    fs::write(path, out).map_err(|e| io(path, e))
}

/// Binary colour PPM with interleaved RGB bytes.
pub fn write_ppm(path: &Path, nx: usize, ny: usize, rgb: &[u8]) -> Result<()> {
    if rgb.len() != 3 * nx * ny {
        return Err(Error::Parameter(format!("{} bytes for a {nx}x{ny} RGB image", rgb.len())));
    }
    let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    fs::write(path, out).map_err(|e| io(path, e))
}

/// Writes a raster as PGM, or as PPM (grey replicated) when the extension
/// is `.ppm`.
pub fn write_image<T: Real>(grid: &RasterGrid<T>, path: &Path) -> Result<()> {
    let (nx, ny) = (grid.viewport.nx, grid.viewport.ny);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ppm")) {
        let rgb: Vec<u8> = grid.data.iter().flat_map(|&b| [b, b, b]).collect();
        write_ppm(path, nx, ny, &rgb)
    } else {
        write_pgm(path, nx, ny, &grid.data)
    }
}

/// `z_re,z_im` header and one row per point.
pub fn points_csv<T: Real>(points: &[Complex<T>]) -> String {
    let mut out = String::from("z_re,z_im\n");
    for z in points {
        out.push_str(&format!("{},{}\n", fmt17(z.re.to_f64_lossy()), fmt17(z.im.to_f64_lossy())));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io(path, e))
}

#[cfg(test)]
mod tests {
    use super::super::Viewport;
    use super::*;

    #[test]
    fn single_pixel_pgm() {
        let dir = std::env::temp_dir().join(format!("corrdyn-pgm-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let vp = Viewport::new(Complex::new(0.0, 0.0), 1.0, 1.0, 1, 1).unwrap();
        let grid = RasterGrid { viewport: vp, data: vec![255], heuristic: false };
        let path = dir.join("one.pgm");
        write_image(&grid, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"P5\n1 1\n255\n\xff");
        let path = dir.join("one.ppm");
        write_image(&grid, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"P6\n1 1\n255\n\xff\xff\xff");
        fs::remove_dir_all(&dir).unwrap();
        assert_eq!(points_csv(&[Complex::new(1.0, -0.5)]), "z_re,z_im\n1.0000000000000000e0,-5.0000000000000000e-1\n");
    }
}
