//! Numerical checks of the constant-angle property and of the closed-form
//! claims about Dini's surface, plus a classifier for the four families.
//!
//! Grid kernels run in parallel; every reduction is done afterwards in grid
//! order so reports are bit-for-bit reproducible.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::curves::Polyline3;
use crate::diffgeo::{curvatures, fundamental_forms, jet, CurvatureReport, CylindricalJet, JetConfig, JetMode};
use crate::error::{GeomError, Result};
use crate::geom::{angle_between, cart_to_cyl, Angle, Vec3};
use crate::killing::KillingField;
use crate::surfaces::{DiniParams, Family, ParamSurface};

/// Angle tolerance of the classifier when analytic jets are available.
pub const TOL_ANGLE_ANALYTIC: f64 = 1e-4;
/// Angle tolerance of the classifier with finite-difference jets.
pub const TOL_ANGLE_FD: f64 = 1e-3;
/// Relative tolerance on curvature used by the classifier.
pub const TOL_CURVATURE: f64 = 1e-3;

/// Below this norm (relative to `max(1, |p|)`) a Killing field counts as vanishing.
const VANISH_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleReport {
    pub samples: usize,
    pub theta_mean: Angle,
    /// Largest `|θ_i − θ_mean|`.
    pub theta_max_dev: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Whether angles were folded into `[0, π/2]`.
    pub fold_applied: bool,
}

impl AngleReport {
    /// Largest deviation of any sample from `nominal`.
    pub fn max_deviation_from(&self, nominal: f64) -> f64 {
        (self.theta_min - nominal).abs().max((self.theta_max - nominal).abs())
    }

    fn from_angles(angles: &[f64], fold_applied: bool) -> Result<Self> {
        if angles.is_empty() {
            return Err(GeomError::DegenerateGrid("no samples".into()));
        }
        let mean = angles.iter().sum::<f64>() / angles.len() as f64;
        let (lo, hi) = angles
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        Ok(Self {
            samples: angles.len(),
            theta_mean: Angle::new(mean.clamp(0.0, PI))?,
            theta_max_dev: (mean - lo).max(hi - mean).max(0.0),
            theta_min: lo,
            theta_max: hi,
            fold_applied,
        })
    }
}

fn check_grid(nu: usize, nv: usize, min: usize) -> Result<()> {
    if nu < min || nv < min {
        return Err(GeomError::DegenerateGrid(format!("{nu}x{nv} grid, need at least {min}x{min}")));
    }
    Ok(())
}

/// Cell-centred sample points `(u, v)` of the domain, row-major in `u`.
fn sample_params(s: &ParamSurface, nu: usize, nv: usize) -> Vec<(f64, f64)> {
    let d = s.domain();
    let vs = d.v_centers(nv);
    d.u_centers(nu)
        .into_iter()
        .flat_map(|u| vs.iter().map(move |&v| (u, v)))
        .collect()
}

fn field_at(field: &KillingField, p: Vec3) -> Result<Vec3> {
    let w = field.eval(p);
    if w.norm() <= VANISH_EPS * p.norm().max(1.0) {
        return Err(GeomError::KillingFieldVanishes(p));
    }
    Ok(w)
}

/// Folded angle between `field` and the surface normal at `nu × nv`
/// cell-centred samples.
pub fn surface_angle_report(
    s: &ParamSurface,
    field: &KillingField,
    nu: usize,
    nv: usize,
    cfg: &JetConfig,
) -> Result<AngleReport> {
    check_grid(nu, nv, 3)?;
    let angles = sample_params(s, nu, nv)
        .par_iter()
        .map(|&(u, v)| {
            let j = jet(s, u, v, cfg)?;
            let w = field_at(field, j.f)?;
            let n = j.fu.cross(j.fv);
            if n.norm() <= 1e-14 * j.fu.norm() * j.fv.norm() {
                return Err(GeomError::DegeneratePoint);
            }
            Ok(angle_between(w, n)?.folded().radians())
        })
        .collect::<Result<Vec<f64>>>()?;
    AngleReport::from_angles(&angles, true)
}

/// Angle between the (oriented) tangent and `field` at interior samples.
pub fn curve_angle_report(c: &Polyline3, field: &KillingField) -> Result<AngleReport> {
    if c.len() < 3 {
        return Err(GeomError::DegenerateGrid(format!("{} curve samples, need at least 3", c.len())));
    }
    let angles = c
        .interior_tangents()
        .into_iter()
        .map(|(i, t)| {
            let p = c.samples[i].p;
            Ok(angle_between(t, field_at(field, p)?)?.radians())
        })
        .collect::<Result<Vec<f64>>>()?;
    AngleReport::from_angles(&angles, false)
}

/// Curvature reports at `nu × nv` cell-centred samples, row-major in `u`.
pub fn curvature_grid(s: &ParamSurface, nu: usize, nv: usize, cfg: &JetConfig) -> Result<Vec<CurvatureReport>> {
    check_grid(nu, nv, 1)?;
    sample_params(s, nu, nv)
        .par_iter()
        .map(|&(u, v)| curvatures(&fundamental_forms(&jet(s, u, v, cfg)?)?))
        .collect()
}

/// Left minus right side of the nine second-order equations satisfied by
/// Dini's surface in cylindrical components, for a jet `(r, φ, z)` with the
/// signed radius. Order: the `r`, `φ`, `z` equations for the `uu`, then the
/// `uv`, then the `vv` derivatives.
pub fn pde_residuals(j: &CylindricalJet, theta: f64, c: f64, u: f64) -> [f64; 9] {
    let (r, p, z) = (&j.r, &j.phi, &j.z);
    let (st, ct) = theta.sin_cos();
    let tt = st / ct;
    let (s, co) = (c * u).sin_cos();
    let rr = r.value;
    [
        r.duu - rr * p.du * p.du - (c * s / ct + c * st * st * co * co / (ct * s)),
        p.duu + 2.0 * r.du / rr * p.du + c * c * tt * co / (s * s),
        z.duu - c * ct * co,
        r.duv - rr * p.du * p.dv - c * tt * tt,
        p.duv + (r.du * p.dv + r.dv * p.du) / rr + c * c * tt * co / (s * ct),
        z.duv,
        r.dvv - rr * p.dv * p.dv - c * tt * tt * s / ct,
        p.dvv + 2.0 * r.dv / rr * p.dv,
        z.dvv,
    ]
}

/// [`pde_residuals`] of the closed-form Dini surface at `(u, v)`.
pub fn dini_pde_residuals(theta: f64, c: f64, u: f64, v: f64) -> Result<[f64; 9]> {
    let params = DiniParams::new(theta, c)?;
    params.check_u(u)?;
    Ok(pde_residuals(&params.cylindrical_jet(u, v, true), theta, c, u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixReport {
    pub radius: f64,
    /// Rise of `z` per full turn of `φ`, with sign.
    pub pitch: f64,
    pub max_dev: f64,
}

/// Number of samples along parameter curves in the property checks.
const CURVE_SAMPLES: usize = 257;

fn check_in(lo: f64, hi: f64, x: f64, what: &str) -> Result<()> {
    if (lo..=hi).contains(&x) {
        Ok(())
    } else {
        Err(GeomError::DomainViolation(format!("{what} = {x} outside [{lo}, {hi}]")))
    }
}

/// Least-squares line `y ≈ a + b x`; returns `(a, b, max residual)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let dev = xs.iter().zip(ys).map(|(x, y)| (a + b * x - y).abs()).fold(0.0, f64::max);
    (a, b, dev)
}

fn unwrap(angles: &mut [f64]) {
    for i in 1..angles.len() {
        let d = angles[i] - angles[i - 1];
        angles[i] -= (d / (2.0 * PI)).round() * 2.0 * PI;
    }
}

/// Samples the `v`-curve `v ↦ F(u0, v)` and checks that it is a circular
/// helix about the z-axis: constant distance to the axis and `z`, `φ` affine
/// in `v`.
pub fn helix_property_check(s: &ParamSurface, u0: f64) -> Result<HelixReport> {
    let d = s.domain();
    check_in(d.u0, d.u1, u0, "u0")?;
    let vs = d.v_nodes(CURVE_SAMPLES);
    let cyl: Vec<_> = vs.iter().map(|&v| cart_to_cyl(s.point(u0, v))).collect();
    let radius = cyl.iter().map(|p| p.r).sum::<f64>() / cyl.len() as f64;
    let r_dev = cyl.iter().map(|p| (p.r - radius).abs()).fold(0.0, f64::max);
    let z: Vec<f64> = cyl.iter().map(|p| p.z).collect();
    let mut phi: Vec<f64> = cyl.iter().map(|p| p.phi).collect();
    unwrap(&mut phi);
    let (_, dz, z_dev) = fit_line(&vs, &z);
    let (_, dphi, phi_dev) = fit_line(&vs, &phi);
    if dphi == 0.0 {
        return Err(GeomError::DegenerateGrid("v-curve does not turn about the axis".into()));
    }
    Ok(HelixReport { radius, pitch: 2.0 * PI * dz / dphi, max_dev: r_dev.max(z_dev).max(phi_dev) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereReport {
    /// Mean distance of the `u`-curve from `(0, 0, v0)`.
    pub radius: f64,
    /// Largest deviation of that distance from `radius`.
    pub max_dev: f64,
    /// Largest `| |Fu| − 1 |` along the curve.
    pub speed_defect: f64,
    /// Centre and radius of the least-squares sphere through the samples.
    pub fitted_center: Vec3,
    pub fitted_radius: f64,
}

impl SphereReport {
    pub fn center_z(&self) -> f64 {
        self.fitted_center.z
    }
}

/// Samples the `u`-curve `u ↦ F(u, v0)` and measures how well it lies on the
/// sphere centred at `(0, 0, v0)`; also fits a sphere independently.
pub fn sphere_property_check(s: &ParamSurface, v0: f64) -> Result<SphereReport> {
    let d = s.domain();
    check_in(d.v0, d.v1, v0, "v0")?;
    let us = d.u_nodes(CURVE_SAMPLES);
    let center = Vec3::new(0.0, 0.0, v0);
    let pts: Vec<Vec3> = us.iter().map(|&u| s.point(u, v0)).collect();
    let dist: Vec<f64> = pts.iter().map(|p| p.distance(center)).collect();
    let radius = dist.iter().sum::<f64>() / dist.len() as f64;
    let max_dev = dist.iter().map(|r| (r - radius).abs()).fold(0.0, f64::max);

    // speed from the analytic jet, or finite differences on interior samples
    let cfg = JetConfig::default();
    let speed_defect = us
        .iter()
        .filter_map(|&u| jet(s, u, v0, &cfg).ok())
        .map(|j| (j.fu.norm() - 1.0).abs())
        .fold(0.0, f64::max);

    let (fitted_center, fitted_radius) = fit_sphere(&pts)?;
    Ok(SphereReport { radius, max_dev, speed_defect, fitted_center, fitted_radius })
}

/// Algebraic least-squares sphere `|p|² = 2 p·c + d`, solved by SVD after
/// shifting to the centroid.
pub fn fit_sphere(pts: &[Vec3]) -> Result<(Vec3, f64)> {
    if pts.len() < 4 {
        return Err(GeomError::DegenerateGrid("sphere fit needs at least 4 points".into()));
    }
    let n = pts.len();
    let g = pts.iter().fold(Vec3::ZERO, |a, &p| a + p) / n as f64;
    let a = DMatrix::from_fn(n, 4, |i, k| {
        let q = pts[i] - g;
        match k {
            0 => 2.0 * q.x,
            1 => 2.0 * q.y,
            2 => 2.0 * q.z,
            _ => 1.0,
        }
    });
    let b = DVector::from_fn(n, |i, _| (pts[i] - g).norm_squared());
    let x = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| GeomError::DegenerateGrid(e.to_string()))?;
    let c = Vec3::new(x[0], x[1], x[2]);
    let r2 = x[3] + c.norm_squared();
    if !(r2 > 0.0) {
        return Err(GeomError::DegenerateGrid("points do not determine a sphere".into()));
    }
    Ok((c + g, r2.sqrt()))
}

/// Residual of `e1(ψ) + cosθ sinψ / μ = 0` on Dini's surface at `(u, v)`,
/// where `ψ` is recovered from the surface normal through
/// `|⟨N, k⟩| = sinθ sinψ` and differentiated along `e1 = ∂u` by central
/// differences.
pub fn frame_compatibility_residual(s: &ParamSurface, u: f64, v: f64) -> Result<f64> {
    let Family::Dini { theta, c } = *s.family() else {
        return Err(GeomError::InvalidArgument("frame check needs a Dini surface".into()));
    };
    let params = DiniParams::new(theta, c)?;
    let h = 1e-5 / c;
    params.check_u(u - h)?;
    params.check_u(u + h)?;
    let cfg = JetConfig::default();
    let psi = |x: f64| -> Result<f64> {
        let ff = fundamental_forms(&jet(s, x, v, &cfg)?)?;
        Ok((ff.normal.z.abs() / theta.sin()).min(1.0).asin())
    };
    let e1_psi = (psi(u + h)? - psi(u - h)?) / (2.0 * h);
    let sp = psi(u)?.sin();
    let mu = -theta.cos() * sp / c;
    Ok(e1_psi + theta.cos() * sp / mu)
}

/// Outcome of [`classify_surface`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyLabel {
    Halfplane,
    Rotational,
    LogSpiralCylinder { theta: f64, c: f64 },
    Dini { theta: f64, c: f64 },
    NotConstantAngle,
    Unknown,
}

impl FamilyLabel {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyLabel::Halfplane => "halfplane",
            FamilyLabel::Rotational => "rotational",
            FamilyLabel::LogSpiralCylinder { .. } => "logspiral-cylinder",
            FamilyLabel::Dini { .. } => "dini",
            FamilyLabel::NotConstantAngle => "not-constant-angle",
            FamilyLabel::Unknown => "unknown",
        }
    }

    pub fn c_hat(&self) -> Option<f64> {
        match *self {
            FamilyLabel::LogSpiralCylinder { c, .. } | FamilyLabel::Dini { c, .. } => Some(c),
            _ => None,
        }
    }
}

fn uses_analytic(s: &ParamSurface, cfg: &JetConfig) -> bool {
    cfg.mode == JetMode::Auto && s.has_analytic_jet()
}

/// Classifies a surface against `field` (normally the rotation about the
/// z-axis) on an `nu × nv` sample grid:
///
/// 1. angle spread above tolerance → `NotConstantAngle`;
/// 2. angle ≈ 0 → `Halfplane`, angle ≈ π/2 → `Rotational`;
/// 3. flat → `LogSpiralCylinder`, with `ĉ` from the spiral `φ = ln c − tanθ ln(r/cosθ)`;
/// 4. constant negative `K` → `Dini` with `ĉ = √(−K)/tanθ`;
/// 5. anything else → `Unknown`.
pub fn classify_surface(s: &ParamSurface, field: &KillingField, nu: usize, nv: usize, cfg: &JetConfig) -> Result<FamilyLabel> {
    check_grid(nu, nv, 5)?;
    let tol = if uses_analytic(s, cfg) { TOL_ANGLE_ANALYTIC } else { TOL_ANGLE_FD };
    let report = surface_angle_report(s, field, nu, nv, cfg)?;
    if report.theta_max_dev > tol {
        return Ok(FamilyLabel::NotConstantAngle);
    }
    let theta = report.theta_mean.radians();
    let near_zero = theta < tol;
    let near_right = (theta - FRAC_PI_2).abs() < tol;
    match (near_zero, near_right) {
        (true, true) => return Ok(FamilyLabel::Unknown),
        (true, false) => return Ok(FamilyLabel::Halfplane),
        (false, true) => return Ok(FamilyLabel::Rotational),
        _ => {}
    }

    let curv = curvature_grid(s, nu, nv, cfg)?;
    let k_abs_max = curv.iter().map(|c| c.gaussian.abs()).fold(0.0, f64::max);
    let k_scale = curv.iter().map(|c| c.k1.powi(2).max(c.k2.powi(2))).fold(0.0, f64::max);
    if k_abs_max <= TOL_CURVATURE * k_scale || k_scale < 1e-300 {
        return Ok(spiral_fit(s, theta, nu, nv)
            .map(|c| FamilyLabel::LogSpiralCylinder { theta, c })
            .unwrap_or(FamilyLabel::Unknown));
    }
    let ks: Vec<f64> = curv.iter().map(|c| c.gaussian).collect();
    let k_mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let spread = ks.iter().map(|k| (k - k_mean).abs()).fold(0.0, f64::max);
    if k_mean < 0.0 && spread <= TOL_CURVATURE * k_mean.abs() {
        let c = (-k_mean).sqrt() / theta.tan();
        if c.is_finite() && c > 0.0 {
            return Ok(FamilyLabel::Dini { theta, c });
        }
    }
    Ok(FamilyLabel::Unknown)
}

/// `ĉ` of the spiral cylinder `φ = ln c − tanθ ln(r / cosθ)`. Since `φ` is
/// only known modulo 2π, `ln ĉ` is the circular mean in `(−π, π]`.
fn spiral_fit(s: &ParamSurface, theta: f64, nu: usize, nv: usize) -> Option<f64> {
    let (mut sin_sum, mut cos_sum) = (0.0, 0.0);
    for (u, v) in sample_params(s, nu, nv) {
        let p = cart_to_cyl(s.point(u, v));
        if p.r <= 0.0 {
            return None;
        }
        let l = p.phi + theta.tan() * (p.r / theta.cos()).ln();
        sin_sum += l.sin();
        cos_sum += l.cos();
    }
    let c = sin_sum.atan2(cos_sum).exp();
    c.is_finite().then_some(c)
}

/// Angle, curvature and classification summary of a surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSummary {
    pub angle: AngleReport,
    pub k_mean: f64,
    pub k_stddev: f64,
    pub h_mean: f64,
    pub label: FamilyLabel,
}

pub fn surface_summary(s: &ParamSurface, field: &KillingField, nu: usize, nv: usize, cfg: &JetConfig) -> Result<SurfaceSummary> {
    let angle = surface_angle_report(s, field, nu, nv, cfg)?;
    let curv = curvature_grid(s, nu, nv, cfg)?;
    let n = curv.len() as f64;
    let k_mean = curv.iter().map(|c| c.gaussian).sum::<f64>() / n;
    let k_var = curv.iter().map(|c| (c.gaussian - k_mean).powi(2)).sum::<f64>() / n;
    let h_mean = curv.iter().map(|c| c.mean).sum::<f64>() / n;
    let label = classify_surface(s, field, nu, nv, cfg)?;
    Ok(SurfaceSummary { angle, k_mean, k_stddev: k_var.sqrt(), h_mean, label })
}
