//! One-dimensional search helpers: bisection, golden-section refinement and
//! grid local-minimum detection.

use alloc::vec::Vec;

use crate::math::sqrt;
use crate::Error;

/// Root of `f` on `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must differ in
/// sign (a zero at either end is returned directly).
pub fn bisect(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<f64, Error> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= xtol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimum of a unimodal `f` on `[a, b]`, returned as `(x, f(x))`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            if c == d {
                break;
            }
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            if c == d {
                break;
            }
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the midpoint can lose to the last interior probe on flat tails
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Indices of strict interior local minima of `values`.
///
/// A plateau of equal values counts as one minimum when both neighbours of
/// the plateau are larger; its representative is the plateau end closest to
/// `prefer` in grid coordinates (the caller passes the index nearest λ = 0).
pub fn grid_local_minima(values: &[f64], prefer: usize) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] < values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] > values[j] && values[i].is_finite() {
                let pick = if prefer.abs_diff(j) < prefer.abs_diff(i) { j } else { i };
                out.push(pick);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Uniform grid of `points` values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - sqrt(2.0)).abs() < 1e-13);
    }

    #[test]
    fn bisect_needs_sign_change() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3), -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn local_minima_basic_and_plateau() {
        let v = [3.0, 1.0, 2.0, 0.5, 0.5, 0.5, 4.0, 3.0, 5.0];
        assert_eq!(grid_local_minima(&v, 8), alloc::vec![1, 5, 7]);
        assert_eq!(grid_local_minima(&v, 0), alloc::vec![1, 3, 7]);
        // boundary minima are not interior minima
        assert!(grid_local_minima(&[0.0, 1.0, 2.0], 0).is_empty());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.5, 0.0, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], -1.5);
        assert_eq!(g[6], 0.0);
    }
}
