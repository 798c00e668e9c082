//! Adaptive Simpson quadrature in one dimension and over a disc.

/// Adaptive Simpson integration of `f` on `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integral of `f(x, y)` over the disc of radius `radius` in polar
/// coordinates: adaptive Simpson in the radius, composite trapezoid (exact
/// for trigonometric polynomials of degree below `n_angles`) in the angle.
pub fn disc_integral<F: Fn(f64, f64) -> f64>(f: F, radius: f64, n_angles: usize, tol: f64) -> f64 {
    let dtheta = 2.0 * std::f64::consts::PI / n_angles as f64;
    let ring = |r: f64| {
        let s: f64 = (0..n_angles)
            .map(|k| {
                let (sin, cos) = (k as f64 * dtheta).sin_cos();
                f(r * cos, r * sin)
            })
            .sum();
        r * s * dtheta
    };
    adaptive_simpson(&ring, 0.0, radius, tol)
}
