//! Uniform hash grid for fixed-radius neighbour queries in the plane.

use std::collections::HashMap;

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct PointGrid<T> {
    cell: T,
    points: Vec<Complex<T>>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl<T: Real> PointGrid<T> {
    /// `cell` should be comparable to the query radius.
    pub fn new(points: &[Complex<T>], cell: T) -> Self {
        let mut grid = Self { cell, points: Vec::with_capacity(points.len()), buckets: HashMap::new() };
        for &z in points {
            grid.insert(z);
        }
        grid
    }

    fn key(&self, z: Complex<T>) -> (i64, i64) {
        let ix = (z.re / self.cell).floor().to_i64().unwrap_or(i64::MAX);
        let iy = (z.im / self.cell).floor().to_i64().unwrap_or(i64::MAX);
        (ix, iy)
    }

    pub fn insert(&mut self, z: Complex<T>) {
        let key = self.key(z);
        self.buckets.entry(key).or_default().push(self.points.len());
        self.points.push(z);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    /// Indices of stored points within `radius` of `z`.
    pub fn within(&self, z: Complex<T>, radius: T) -> Vec<usize> {
        let (cx, cy) = self.key(z);
        let reach = (radius / self.cell).ceil().to_i64().unwrap_or(0).max(0);
        let mut out = Vec::new();
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(idx) = self.buckets.get(&(cx + dx, cy + dy)) {
                    out.extend(idx.iter().copied().filter(|&i| (self.points[i] - z).norm() <= radius));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn any_within(&self, z: Complex<T>, radius: T) -> bool {
        let (cx, cy) = self.key(z);
        let reach = (radius / self.cell).ceil().to_i64().unwrap_or(0).max(0);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(idx) = self.buckets.get(&(cx + dx, cy + dy)) {
                    if idx.iter().any(|&i| (self.points[i] - z).norm() <= radius) {
                        return true;
                    }
                }
            }
        }
        false
    }
}
