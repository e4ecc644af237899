//! Finite orbits of the correspondence with their branch labels.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::correspondence::CorrespondenceParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Finite word over `{0, .., alphabet - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolSequence {
    alphabet: u32,
    symbols: Vec<u32>,
}

impl SymbolSequence {
    pub fn new(alphabet: u32, symbols: Vec<u32>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Parameter("empty alphabet".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::Parameter(format!("symbol {s} outside 0..{alphabet}")));
        }
        Ok(Self { alphabet, symbols })
    }

    /// The constant word `0^len`.
    pub fn zeros(alphabet: u32, len: usize) -> Self {
        Self { alphabet, symbols: vec![0; len] }
    }

    /// Parses a digit string such as `"1021"`.
    pub fn parse(alphabet: u32, s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Parameter(format!("bad symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, symbols)
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.symbols[i]
    }

    /// Extends the word with zeros to length `n`, or truncates it.
    pub fn padded(&self, n: usize) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.resize(n, 0);
        Self { alphabet: self.alphabet, symbols }
    }

    /// All words of length `len` in lexicographic order.
    pub fn all_words(alphabet: u32, len: usize) -> Vec<Self> {
        let total = (alphabet as usize).pow(len as u32);
        (0..total)
            .map(|mut idx| {
                let mut symbols = vec![0; len];
                for s in symbols.iter_mut().rev() {
                    *s = (idx % alphabet as usize) as u32;
                    idx /= alphabet as usize;
                }
                Self { alphabet, symbols }
            })
            .collect()
    }

    /// Cyclic rotation by `k` places to the left.
    pub fn rotated(&self, k: usize) -> Self {
        let mut symbols = self.symbols.clone();
        if !symbols.is_empty() {
            let n = symbols.len();
            symbols.rotate_left(k % n);
        }
        Self { alphabet: self.alphabet, symbols }
    }
}

impl std::fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sep = if self.alphabet > 10 { "," } else { "" };
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `points[i + 1]` is an image of `points[i]`; symbols are forward branch
    /// indices in `0..q`.
    Forward,
    /// `points[i + 1]` is a preimage of `points[i]`; symbols are preimage
    /// indices in `0..p`.
    Backward,
}

/// `points[0]` is the base point; `symbols[i]` labels the step from
/// `points[i]` to `points[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSegment<T> {
    direction: Direction,
    points: Vec<Complex<T>>,
    symbols: Vec<u32>,
}

impl<T: Real> OrbitSegment<T> {
    /// Follows forward branches `symbols` from `z0`.
    pub fn forward(params: &CorrespondenceParams<T>, z0: Complex<T>, symbols: &[u32]) -> Result<Self> {
        let collapse = T::lit(T::COLLAPSE_TOL);
        let mut points = Vec::with_capacity(symbols.len() + 1);
        points.push(z0);
        let mut z = z0;
        for (step, &k) in symbols.iter().enumerate() {
            if !params.is_integer_beta() && z.norm() < collapse {
                return Err(Error::BranchCollapse { step, modulus: z.norm().to_f64_lossy() });
            }
            z = params.branch_image(z, k as usize)?;
            points.push(z);
        }
        Ok(Self { direction: Direction::Forward, points, symbols: symbols.to_vec() })
    }

    /// Follows backward branches `symbols` from `w0`.
    pub fn backward(params: &CorrespondenceParams<T>, w0: Complex<T>, symbols: &[u32]) -> Result<Self> {
        let mut points = Vec::with_capacity(symbols.len() + 1);
        points.push(w0);
        let mut w = w0;
        for &j in symbols {
            w = params.preimage_branch(w, j as usize)?;
            points.push(w);
        }
        Ok(Self { direction: Direction::Backward, points, symbols: symbols.to_vec() })
    }

    /// Wraps raw data without checking it against any parameters.
    pub fn from_raw(direction: Direction, points: Vec<Complex<T>>, symbols: Vec<u32>) -> Result<Self> {
        if points.len() != symbols.len() + 1 {
            return Err(Error::Parameter(format!(
                "{} points need {} symbols, got {}",
                points.len(),
                points.len().saturating_sub(1),
                symbols.len()
            )));
        }
        Ok(Self { direction, points, symbols })
    }

    /// Checks every step against the correspondence residual.
    pub fn validate(&self, params: &CorrespondenceParams<T>) -> Result<()> {
        for pair in self.points.windows(2) {
            let (z, w) = match self.direction {
                Direction::Forward => (pair[0], pair[1]),
                Direction::Backward => (pair[1], pair[0]),
            };
            let (res, tol) = params.residual(z, w);
            if !(res <= tol) {
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

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn base(&self) -> Complex<T> {
        self.points[0]
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Drops the first point and symbol.
    pub fn shifted(&self) -> Result<Self> {
        if self.symbols.is_empty() {
            return Err(Error::ShortOrbit { needed: 1, have: 0 });
        }
        Ok(Self {
            direction: self.direction,
            points: self.points[1..].to_vec(),
            symbols: self.symbols[1..].to_vec(),
        })
    }

    /// Keeps the first `steps` steps.
    pub fn truncated(&self, steps: usize) -> Self {
        let n = steps.min(self.len());
        Self {
            direction: self.direction,
            points: self.points[..=n].to_vec(),
            symbols: self.symbols[..n].to_vec(),
        }
    }

    /// Largest modulus along the orbit.
    pub fn max_modulus(&self) -> T {
        self.points.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// The same points in the opposite order and direction, relabelled with
    /// the nearest branch at each step. Pulling back along a backward orbit
    /// and reversing is the stable way to get long forward orbits on a
    /// repeller.
    pub fn reversed(&self, params: &CorrespondenceParams<T>) -> Result<Self> {
        let points: Vec<Complex<T>> = self.points.iter().rev().copied().collect();
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        let symbols = points
            .windows(2)
            .map(|pair| match direction {
                Direction::Forward => nearest_branch(params, pair[0], pair[1]),
                Direction::Backward => nearest_preimage(params, pair[0], pair[1]),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { direction, points, symbols })
    }

    /// Prepends a step that ends at the current base point.
    pub fn prepend(&self, point: Complex<T>, symbol: u32) -> Self {
        let mut points = Vec::with_capacity(self.points.len() + 1);
        points.push(point);
        points.extend_from_slice(&self.points);
        let mut symbols = Vec::with_capacity(self.symbols.len() + 1);
        symbols.push(symbol);
        symbols.extend_from_slice(&self.symbols);
        Self { direction: self.direction, points, symbols }
    }
}

/// Forward branch index `k` whose image of `z` is nearest to `w`.
pub fn nearest_branch<T: Real>(params: &CorrespondenceParams<T>, z: Complex<T>, w: Complex<T>) -> Result<u32> {
    if z.is_zero() {
        return Ok(0);
    }
    let imgs = params.images(z)?;
    let (k, _) = imgs
        .iter()
        .enumerate()
        .map(|(k, v)| (k, (v - w).norm()))
        .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(k as u32)
}

/// Preimage index `j` whose preimage of `w` is nearest to `z`.
pub fn nearest_preimage<T: Real>(params: &CorrespondenceParams<T>, w: Complex<T>, z: Complex<T>) -> Result<u32> {
    let pre = params.preimages(w)?;
    let (j, _) = pre
        .iter()
        .enumerate()
        .map(|(j, v)| (j, (v - z).norm()))
        .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(j as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn words_are_lexicographic() {
        let w = SymbolSequence::all_words(2, 3);
        assert_eq!(w.len(), 8);
        assert_eq!(w[0].symbols(), &[0, 0, 0]);
        assert_eq!(w[1].symbols(), &[0, 0, 1]);
        assert_eq!(w[7].symbols(), &[1, 1, 1]);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn parse_and_pad() {
        let s = SymbolSequence::parse(2, "10").unwrap();
        assert_eq!(s.padded(4).symbols(), &[1, 0, 0, 0]);
        assert_eq!(s.to_string(), "10");
        assert!(SymbolSequence::parse(2, "12").is_err());
        assert_eq!(s.rotated(1).symbols(), &[0, 1]);
    }

    #[test]
    fn forward_and_backward_are_valid() {
        let p = CorrespondenceParams::new(6, 2, C::new(0.0, 0.2)).unwrap();
        let o = OrbitSegment::forward(&p, C::new(0.9, 0.1), &[0, 1, 1]).unwrap();
        assert_eq!(o.len(), 3);
        o.validate(&p).unwrap();
        let b = OrbitSegment::backward(&p, C::new(0.9, 0.1), &[0, 5, 3, 2]).unwrap();
        b.validate(&p).unwrap();
        assert_eq!(b.direction(), Direction::Backward);
        let bad = OrbitSegment::from_raw(Direction::Forward, vec![C::new(1.0, 0.0), C::new(0.3, 0.0)], vec![0]).unwrap();
        assert!(bad.validate(&p).is_err());

        let f = b.reversed(&p).unwrap();
        assert_eq!(f.direction(), Direction::Forward);
        assert_eq!(f.base(), b.points()[4]);
        f.validate(&p).unwrap();
        for (i, pair) in f.points().windows(2).enumerate() {
            assert!((p.branch_image(pair[0], f.symbols()[i] as usize).unwrap() - pair[1]).norm() < 1e-12);
        }
        assert_eq!(f.reversed(&p).unwrap(), b);
    }

    #[test]
    fn forward_collapse_detected() {
        let p = CorrespondenceParams::new(3, 2, C::new(0.0, 0.0)).unwrap();
        assert!(matches!(
            OrbitSegment::forward(&p, C::new(1e-12, 0.0), &[0, 0]),
            Err(Error::BranchCollapse { step: 0, .. })
        ));
    }

    #[test]
    fn nearest_branch_recovers_label() {
        let p = CorrespondenceParams::new(6, 2, C::new(0.05, 0.1)).unwrap();
        let z = C::new(-0.3, 0.95);
        for k in 0..2 {
            let w = p.branch_image(z, k).unwrap();
            assert_eq!(nearest_branch(&p, z, w).unwrap(), k as u32);
        }
    }

    #[test]
    fn shift_and_truncate() {
        let p = CorrespondenceParams::new(3, 2, C::new(0.0, 0.0)).unwrap();
        let o = OrbitSegment::forward(&p, C::new(0.0, 1.0), &[0, 1, 0, 1]).unwrap();
        let s = o.shifted().unwrap();
        assert_eq!(s.base(), o.points()[1]);
        assert_eq!(s.len(), 3);
        assert_eq!(o.truncated(2).points().len(), 3);
    }
}
