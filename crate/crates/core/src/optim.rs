//! Small derivative-free 1-D routines: golden-section maximization, grid
//! scans and bracketed root finding.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizer of a unimodal function on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub converged: bool,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`. The
/// endpoints are compared against the interior result, so maxima on the
/// boundary are returned exactly.
pub fn golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> Maximum {
    if hi <= lo {
        return Maximum {
            x: lo,
            value: f(lo),
            converged: true,
        };
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iter = 0;
    while (b - a) > x_tol && iter < max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    let converged = (b - a) <= x_tol;
    let mut best = if fc >= fd {
        Maximum {
            x: c,
            value: fc,
            converged,
        }
    } else {
        Maximum {
            x: d,
            value: fd,
            converged,
        }
    };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.value {
            best = Maximum {
                x,
                value: v,
                converged,
            };
        }
    }
    best
}

/// Evaluates `f` on `n + 1` evenly spaced points of `[lo, hi]` and returns
/// the index and value of the largest.
pub fn grid_argmax<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
) -> (usize, f64, f64) {
    let mut best = (0, lo, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = if n == 0 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        };
        let v = f(x);
        if v > best.2 {
            best = (i, x, v);
        }
    }
    best
}

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ
/// in sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::numerical(format!(
            "root not bracketed on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= x_tol * mid.abs().max(1.0) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_interior_and_boundary_maxima() {
        let m = golden_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-12, 200);
        assert!(m.converged);
        assert_abs_diff_eq!(m.x, 0.3, epsilon = 1e-6);
        let edge = golden_max(|x| x, 0.0, 2.0, 1e-12, 200);
        assert_eq!(edge.x, 2.0);
        let degenerate = golden_max(|x| x * x, 1.0, 1.0, 1e-12, 10);
        assert_eq!(degenerate.x, 1.0);
    }

    #[test]
    fn bisection_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn grid_scan() {
        let (i, x, v) = grid_argmax(|x| -(x - 0.5).abs(), 0.0, 1.0, 10);
        assert_eq!(i, 5);
        assert_abs_diff_eq!(x, 0.5);
        assert_abs_diff_eq!(v, 0.0);
    }
}
