//! Cumulative composite Simpson quadrature on uniform grids.

use crate::error::{GeomError, Result};

/// Running Simpson integral of samples taken on `2m + 1` equally spaced
/// points with spacing `h`. Returns the `m + 1` partial integrals at the
/// even-indexed points, starting with 0.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Result<Vec<f64>> {
    if values.len() < 3 || values.len().is_multiple_of(2) {
        return Err(GeomError::InvalidArgument(format!(
            "Simpson quadrature needs an odd number (>= 3) of samples, got {}",
            values.len()
        )));
    }
    let mut out = Vec::with_capacity(values.len() / 2 + 1);
    let mut acc = 0.0;
    out.push(acc);
    for w in values.windows(3).step_by(2) {
        acc += h / 3.0 * (w[0] + 4.0 * w[1] + w[2]);
        out.push(acc);
    }
    Ok(out)
}

/// Uniform grid of `n` points spanning `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + step * i as f64 })
        .collect()
}

/// `∫_a^{s_i} f` at each of the `n` uniform samples `s_i` of `[a, b]`.
///
/// Each cell is integrated with Simpson's rule using its midpoint, so the
/// integrand is evaluated on the half-step grid of `2n − 1` points and the
/// result is fourth-order accurate at every sample.
pub fn cumulative_simpson_fn<F>(f: F, a: f64, b: f64, n: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    check_interval(a, b)?;
    if n < 2 {
        return Err(GeomError::InvalidArgument(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let fine = uniform_grid(a, b, 2 * n - 1);
    let values: Vec<f64> = fine.iter().map(|&s| f(s)).collect();
    cumulative_simpson(&values, (b - a) / (2 * (n - 1)) as f64)
}

/// Composite Simpson value of `∫_a^b f` with `cells` panels.
pub fn simpson<F>(f: F, a: f64, b: f64, cells: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = (b - a) / cells as f64;
    (0..cells)
        .map(|k| {
            let x0 = a + h * k as f64;
            h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h))
        })
        .sum()
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && b > a {
        Ok(())
    } else {
        Err(GeomError::InvalidRange { start: a, end: b })
    }
}
