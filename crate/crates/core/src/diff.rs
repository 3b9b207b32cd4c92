//! Second-order finite-difference stencils on uniform grids.
//!
//! Interior samples use central differences; the two boundary samples use
//! one-sided stencils of the same order.

/// First derivative from forward increments `steps[j] = f[j+1] - f[j]`.
///
/// Working from increments lets callers supply increments that are more
/// accurate than the difference of two large stored values (phase
/// increments computed as `arg(z[j+1] * conj(z[j]))`, for instance). The
/// result is algebraically identical to the central stencil
/// `(f[j+1] - f[j-1]) / (2 dt)` with `(-3 f0 + 4 f1 - f2) / (2 dt)` and its
/// mirror at the ends. Needs at least two increments.
pub fn first_from_steps(steps: &[f64], dt: f64) -> Vec<f64> {
    let m = steps.len();
    assert!(m >= 2, "need at least three samples");
    let h2 = 2.0 * dt;
    let mut out = Vec::with_capacity(m + 1);
    out.push((3.0 * steps[0] - steps[1]) / h2);
    out.extend(steps.windows(2).map(|w| (w[0] + w[1]) / h2));
    out.push((3.0 * steps[m - 1] - steps[m - 2]) / h2);
    out
}

/// First derivative of samples `f` with step `dt`. Needs `f.len() >= 3`.
pub fn first(f: &[f64], dt: f64) -> Vec<f64> {
    let steps: Vec<f64> = f.windows(2).map(|w| w[1] - w[0]).collect();
    first_from_steps(&steps, dt)
}

/// Second derivative: 3-point stencil inside, 4-point one-sided stencil
/// `(2 f0 - 5 f1 + 4 f2 - f3) / dt^2` at the ends. Needs `f.len() >= 4`.
pub fn second(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "need at least four samples");
    let h = dt * dt;
    let mut out = Vec::with_capacity(n);
    out.push((2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h);
    out.extend(f.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]) / h));
    out.push((2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h);
    out
}

/// Componentwise application of a scalar stencil to a 3-vector series.
pub fn componentwise(v: &[[f64; 3]], op: impl Fn(&[f64]) -> Vec<f64>) -> Vec<[f64; 3]> {
    let cols: Vec<Vec<f64>> = (0..3)
        .map(|k| op(&v.iter().map(|s| s[k]).collect::<Vec<_>>()))
        .collect();
    (0..v.len())
        .map(|j| [cols[0][j], cols[1][j], cols[2][j]])
        .collect()
}
