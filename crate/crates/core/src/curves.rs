//! Curves making a constant angle with the unit circle or with the rotation
//! field `−y∂x + x∂y`.
//!
//! All generators are parameterized by arc length (exactly for the closed
//! forms, up to quadrature error for the integrated ones) and return
//! [`Polyline3`] samples on a uniform parameter grid.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::geom::{cyl_to_cart, Angle, CylPoint, Vec3};
use crate::quadrature::{check_interval, cumulative_simpson, cumulative_simpson_fn, uniform_grid};

/// Samples closer than this to the z-axis count as lying on it.
pub const AXIS_EPS: f64 = 1e-12;

/// Margin applied to the arccos domain `(-1, 1)`.
pub const ARCCOS_MARGIN: f64 = 1e-6;

pub const TURN: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub p: Vec3,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline3 {
    pub samples: Vec<CurveSample>,
    pub closed: bool,
}

impl Polyline3 {
    pub fn new(samples: Vec<CurveSample>, closed: bool) -> Self {
        Self { samples, closed }
    }

    fn from_parts(params: &[f64], points: impl IntoIterator<Item = Vec3>) -> Self {
        let samples: Vec<CurveSample> = params
            .iter()
            .zip(points)
            .map(|(&s, p)| CurveSample { s, p })
            .collect();
        let closed = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) if samples.len() > 2 => a.p.distance(b.p) < 1e-9,
            _ => false,
        };
        Self { samples, closed }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.samples.iter().map(|c| c.p)
    }

    pub fn params(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|c| c.s)
    }

    /// Rigid rotation of every sample about the z-axis.
    pub fn rotate_z(&self, angle: f64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|c| CurveSample { s: c.s, p: c.p.rotate_z(angle) })
                .collect(),
            closed: self.closed,
        }
    }

    fn is_uniform(&self) -> bool {
        if self.samples.len() < 3 {
            return true;
        }
        let step = self.samples[1].s - self.samples[0].s;
        self.samples
            .windows(2)
            .all(|w| ((w[1].s - w[0].s) - step).abs() <= 1e-9 * step.abs())
    }

    /// Central-difference tangents `(index, d p / d s)` at interior samples.
    ///
    /// Uniformly sampled curves with at least five samples use the fourth-order
    /// five-point stencil and skip two samples at each end; otherwise the
    /// three-point stencil (valid on non-uniform grids) is used and one sample
    /// is skipped at each end.
    pub fn interior_tangents(&self) -> Vec<(usize, Vec3)> {
        let n = self.samples.len();
        let p = |i: usize| self.samples[i].p;
        let s = |i: usize| self.samples[i].s;
        if n >= 5 && self.is_uniform() {
            let h = (s(n - 1) - s(0)) / (n - 1) as f64;
            (2..n - 2)
                .map(|i| {
                    let d = (p(i - 2) - p(i + 2)) + (p(i + 1) - p(i - 1)) * 8.0;
                    (i, d / (12.0 * h))
                })
                .collect()
        } else if n >= 3 {
            (1..n - 1)
                .map(|i| {
                    let (hl, hr) = (s(i) - s(i - 1), s(i + 1) - s(i));
                    let d = (p(i + 1) - p(i)) * (hl / (hr * (hl + hr)))
                        + (p(i) - p(i - 1)) * (hr / (hl * (hl + hr)));
                    (i, d)
                })
                .collect()
        } else {
            Vec::new()
        }
    }
}

/// Largest relative gap `|chord / Δs − 1|` over consecutive samples.
/// Zero when there are fewer than two samples.
pub fn arclength_defect(c: &Polyline3) -> f64 {
    c.samples
        .windows(2)
        .map(|w| (w[1].p.distance(w[0].p) / (w[1].s - w[0].s) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Unit tangent `(−sin σ, cos σ)` of the unit circle parameterized by `σ(s)`.
pub fn circle_tangent(sigma: f64) -> Vec3 {
    Vec3::new(-sigma.sin(), sigma.cos(), 0.0)
}

/// Planar unit-speed curve whose tangent makes angle `theta` with the tangent
/// of the unit circle `(cos σ(s), sin σ(s))`.
///
/// With `C(s) = ∫ cos σ` and `S(s) = ∫ sin σ` taken from the left endpoint,
/// the curve is `(sinθ C − cosθ S, cosθ C + sinθ S)`: the θ = 0 curve
/// `(−S, C)` turned clockwise by θ.
pub fn curve_vs_circle<F>(sigma: F, theta: Angle, start: f64, end: f64, n: usize) -> Result<Polyline3>
where
    F: Fn(f64) -> f64,
{
    check_interval(start, end)?;
    check_count(n, 3)?;
    let cos_int = cumulative_simpson_fn(|s| sigma(s).cos(), start, end, n)?;
    let sin_int = cumulative_simpson_fn(|s| sigma(s).sin(), start, end, n)?;
    let (st, ct) = theta.radians().sin_cos();
    let grid = uniform_grid(start, end, n);
    let points = cos_int
        .iter()
        .zip(&sin_int)
        .map(|(&c, &s)| Vec3::new(st * c - ct * s, ct * c + st * s, 0.0));
    Ok(Polyline3::from_parts(&grid, points))
}

/// The three planar solutions for the rotation field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarKillingCurveKind {
    /// Circle of radius `r0` about the origin, an integral curve of the field.
    Circle { r0: f64 },
    /// Line through the origin in direction `direction` (radians from +x).
    Line { direction: f64 },
    /// `r(φ) = exp(tanθ (φ − φ0))`.
    LogSpiral { theta: Angle, phi0: f64 },
}

/// Radius of the spiral `r(φ) = exp(tanθ (φ − φ0))`.
pub fn log_spiral_radius(theta: Angle, phi0: f64, phi: f64) -> f64 {
    (theta.radians().tan() * (phi - phi0)).exp()
}

/// Closed-form curve of the given kind sampled at `n` points of the arc-length
/// interval `[start, end]`.
///
/// Circles start at `(r0, 0)`. Lines are `s·(cos α, sin α)`. The spiral uses
/// `r(s) = s sinθ`, `φ(s) = φ0 + cotθ ln r(s)`, so `s` must stay positive.
pub fn planar_killing_curve(
    kind: PlanarKillingCurveKind,
    start: f64,
    end: f64,
    n: usize,
) -> Result<Polyline3> {
    check_interval(start, end)?;
    check_count(n, 2)?;
    let grid = uniform_grid(start, end, n);
    let points: Vec<Vec3> = match kind {
        PlanarKillingCurveKind::Circle { r0 } => {
            if !(r0 > 0.0) {
                return Err(GeomError::InvalidArgument(format!("circle radius {r0} must be positive")));
            }
            grid.iter()
                .map(|&s| cyl_to_cart(CylPoint::new(r0, s / r0, 0.0)))
                .collect()
        }
        PlanarKillingCurveKind::Line { direction } => {
            if start <= AXIS_EPS && end >= -AXIS_EPS {
                return Err(GeomError::OriginOnCurve);
            }
            let (sa, ca) = direction.sin_cos();
            grid.iter().map(|&s| Vec3::new(s * ca, s * sa, 0.0)).collect()
        }
        PlanarKillingCurveKind::LogSpiral { theta, phi0 } => {
            let t = theta.radians();
            if !(t > 0.0 && t < FRAC_PI_2) {
                return Err(GeomError::InvalidArgument(format!(
                    "spiral angle {t} must lie in (0, pi/2)"
                )));
            }
            let (st, ct) = t.sin_cos();
            grid.iter()
                .map(|&s| {
                    let r = s * st;
                    if r < AXIS_EPS {
                        return Err(GeomError::OriginOnCurve);
                    }
                    Ok(cyl_to_cart(CylPoint::new(r, phi0 + ct / st * r.ln(), 0.0)))
                })
                .collect::<Result<_>>()?
        }
    };
    if points.iter().any(|p| p.x.hypot(p.y) < AXIS_EPS) {
        return Err(GeomError::OriginOnCurve);
    }
    Ok(Polyline3::from_parts(&grid, points))
}

/// The free function `ω(s)` with `r' = sinθ cos ω`, `z' = sinθ sin ω`.
#[derive(Clone)]
pub enum OmegaSpec {
    Constant(f64),
    /// `ω(s) = m s + n`, `m ≠ 0`.
    Affine { m: f64, n: f64 },
    /// `ω(s) = arccos s` on `(−1, 1)`.
    ArcCos,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(w) => write!(f, "Constant({w})"),
            Self::Affine { m, n } => write!(f, "Affine {{ m: {m}, n: {n} }}"),
            Self::ArcCos => f.write_str("ArcCos"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl OmegaSpec {
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant(w) => *w,
            Self::Affine { m, n } => m * s + n,
            Self::ArcCos => s.acos(),
            Self::Custom(f) => f(s),
        }
    }

    /// Primitives `(∫cos ω, ∫sin ω)` without additive constant, where a
    /// closed form exists. They fix the integration constants of the
    /// generated curve; custom functions start from zero at the left end.
    pub fn primitives(&self, s: f64) -> Option<(f64, f64)> {
        match self {
            Self::Constant(w) => Some((s * w.cos(), s * w.sin())),
            Self::Affine { m, n } => {
                let w = m * s + n;
                Some((w.sin() / m, -w.cos() / m))
            }
            Self::ArcCos => {
                let root = (1.0 - s * s).sqrt();
                Some((0.5 * s * s, 0.5 * (s * root + s.asin())))
            }
            Self::Custom(_) => None,
        }
    }

    fn admissible_range(&self, start: f64, end: f64) -> Result<(f64, f64)> {
        match self {
            Self::Affine { m, .. } if *m == 0.0 => Err(GeomError::InvalidArgument(
                "affine omega needs a nonzero slope".into(),
            )),
            Self::ArcCos => {
                let (a, b) = (start.max(-1.0 + ARCCOS_MARGIN), end.min(1.0 - ARCCOS_MARGIN));
                check_interval(a, b)?;
                Ok((a, b))
            }
            _ => Ok((start, end)),
        }
    }
}

/// Space curve making constant angle `theta` with the rotation field, in
/// cylindrical form
///
/// ```text
/// r(s) = r0 + sinθ ∫ cos ω,   z(s) = sinθ ∫ sin ω,   φ(s) = cosθ ∫ 1/r
/// ```
///
/// The `r` and `z` integrals are the closed-form primitives of
/// [`OmegaSpec::primitives`] at the left endpoint plus the Simpson integral
/// from there; `φ` starts at 0 at the left endpoint. For `ArcCos` the range is
/// clipped to `[−1 + 1e−6, 1 − 1e−6]`.
pub fn spatial_killing_curve(
    omega: &OmegaSpec,
    theta: Angle,
    r0: f64,
    start: f64,
    end: f64,
    n: usize,
) -> Result<Polyline3> {
    check_interval(start, end)?;
    check_count(n, 3)?;
    let t = theta.radians();
    if !(t > 0.0 && t < FRAC_PI_2) {
        return Err(GeomError::InvalidArgument(format!(
            "angle {t} must lie in (0, pi/2)"
        )));
    }
    let (start, end) = omega.admissible_range(start, end)?;
    let (st, ct) = t.sin_cos();
    let (cos0, sin0) = omega.primitives(start).unwrap_or((0.0, 0.0));

    // r on the half-step grid so that the φ quadrature can use Simpson cells
    let fine_n = 2 * n - 1;
    let fine = uniform_grid(start, end, fine_n);
    let r: Vec<f64> = cumulative_simpson_fn(|s| omega.eval(s).cos(), start, end, fine_n)?
        .into_iter()
        .map(|c| r0 + st * (cos0 + c))
        .collect();
    if let Some(i) = r.iter().position(|&ri| ri <= 0.0) {
        return Err(GeomError::RadiusNonPositive(fine[i]));
    }
    let z: Vec<f64> = cumulative_simpson_fn(|s| omega.eval(s).sin(), start, end, n)?
        .into_iter()
        .map(|v| st * (sin0 + v))
        .collect();
    let inv_r: Vec<f64> = r.iter().map(|ri| 1.0 / ri).collect();
    let phi = cumulative_simpson(&inv_r, (end - start) / (fine_n - 1) as f64)?;

    let grid = uniform_grid(start, end, n);
    let points = (0..n).map(|i| cyl_to_cart(CylPoint::new(r[2 * i], ct * phi[i], z[i])));
    Ok(Polyline3::from_parts(&grid, points))
}

fn check_count(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(GeomError::InvalidArgument(format!(
            "need at least {min} samples, got {n}"
        )))
    } else {
        Ok(())
    }
}
