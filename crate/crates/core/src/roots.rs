//! Bracketed root finding on the real line.

use crate::scalar::Real;

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must have opposite signs (or
/// one of them vanish). Stops when the bracket is narrower than `tol` or
/// stops shrinking in `T`.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T) -> Option<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Some(lo);
    }
    if f_hi == T::zero() {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    let two = T::lit(2.0);
    for _ in 0..400 {
        let mid = (lo + hi) / two;
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) / two)
}

/// Scans `[lo, hi]` on `samples + 1` equispaced nodes and bisects every sign
/// change. Roots are returned in increasing order.
pub fn scan_roots<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, samples: usize, tol: T) -> Vec<T> {
    let n = T::from_usize_lossy(samples);
    let node = |i: usize| lo + (hi - lo) * T::from_usize_lossy(i) / n;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=samples {
        let b = node(i);
        let fb = f(b);
        if fa == T::zero() {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != T::zero() {
            if let Some(r) = bisect(&f, a, b, tol) {
                roots.push(r);
            }
        }
        a = b;
        fa = fb;
    }
    if fa == T::zero() {
        roots.push(a);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn scan_finds_both_cubic_roots() {
        let roots = scan_roots(|x: f64| x * x * x - x + 0.2, 1e-12, 1.0 - 1e-12, 1024, 1e-12);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.209_148_848_441_316_6).abs() < 1e-11);
        assert!((roots[1] - 0.878_885_066_249_972_8).abs() < 1e-11);
    }

    #[test]
    fn scan_in_f32() {
        let roots = scan_roots(|x: f32| x * x - 0.25, 0.0, 1.0, 64, 1e-6);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.5).abs() < 1e-5);
    }
}
