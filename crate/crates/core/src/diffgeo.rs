//! Numerical differential geometry of parametric surfaces: 2-jets, the first
//! and second fundamental forms, curvatures and principal directions, and
//! the Levi-Civita connection of E³ in cylindrical coordinates.
//!
//! Second fundamental form entries are always given in the coordinate
//! (chart) basis `∂u, ∂v` unless a method says otherwise; use
//! [`FundamentalForms::second_form`] to evaluate them on other vectors, e.g.
//! an orthonormal frame written in chart components.

use crate::error::{GeomError, Result};
use crate::geom::{CylPoint, Vec3};
use crate::surfaces::ParamSurface;

/// Position and first and second partials of a surface at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub f: Vec3,
    pub fu: Vec3,
    pub fv: Vec3,
    pub fuu: Vec3,
    pub fuv: Vec3,
    pub fvv: Vec3,
}

impl SurfaceJet {
    /// Jet of `(u, v) ↦ F(−u, v)` at the mirrored point. Flips the normal.
    pub fn reversed_u(self) -> Self {
        Self { fu: -self.fu, fuv: -self.fuv, ..self }
    }
}

/// 2-jet of a scalar function of `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScalarJet {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl ScalarJet {
    pub fn constant(value: f64) -> Self {
        Self { value, ..Self::default() }
    }

    pub fn negated(self) -> Self {
        Self {
            value: -self.value,
            du: -self.du,
            dv: -self.dv,
            duu: -self.duu,
            duv: -self.duv,
            dvv: -self.dvv,
        }
    }
}

/// A surface given by its cylindrical components `(r, φ, z)` and their
/// partials. `r` may be negative, meaning the point `(|r|, φ + π, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalJet {
    pub r: ScalarJet,
    pub phi: ScalarJet,
    pub z: ScalarJet,
}

impl CylindricalJet {
    /// Cartesian jet, using `∂_a P = r_a e_r + r φ_a e_φ + z_a k` and
    /// `∂_ab P = (r_ab − r φ_a φ_b) e_r + (r φ_ab + r_a φ_b + r_b φ_a) e_φ + z_ab k`.
    pub fn to_cartesian(&self) -> SurfaceJet {
        let (r, p, z) = (&self.r, &self.phi, &self.z);
        let at = CylPoint::new(r.value, p.value, z.value);
        let (er, ephi) = (at.radial(), at.angular());
        let first = |ra: f64, pa: f64, za: f64| er * ra + ephi * (r.value * pa) + Vec3::Z * za;
        let second = |rab: f64, pab: f64, zab: f64, ra: f64, pa: f64, rb: f64, pb: f64| {
            er * (rab - r.value * pa * pb) + ephi * (r.value * pab + ra * pb + rb * pa) + Vec3::Z * zab
        };
        SurfaceJet {
            f: er * r.value + Vec3::Z * z.value,
            fu: first(r.du, p.du, z.du),
            fv: first(r.dv, p.dv, z.dv),
            fuu: second(r.duu, p.duu, z.duu, r.du, p.du, r.du, p.du),
            fuv: second(r.duv, p.duv, z.duv, r.du, p.du, r.dv, p.dv),
            fvv: second(r.dvv, p.dvv, z.dvv, r.dv, p.dv, r.dv, p.dv),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JetMode {
    /// Analytic jet when the surface provides one, finite differences otherwise.
    #[default]
    Auto,
    FiniteDifference,
}

/// Finite-difference steps, scaled by `max(1, |u|)` in `u` and `max(1, |v|)` in `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetConfig {
    pub mode: JetMode,
    pub h_first: f64,
    pub h_second: f64,
}

impl Default for JetConfig {
    fn default() -> Self {
        Self { mode: JetMode::Auto, h_first: 1e-5, h_second: 1e-3 }
    }
}

impl JetConfig {
    pub fn finite_difference() -> Self {
        Self { mode: JetMode::FiniteDifference, ..Self::default() }
    }
}

pub fn jet(s: &ParamSurface, u: f64, v: f64, cfg: &JetConfig) -> Result<SurfaceJet> {
    if cfg.mode == JetMode::Auto {
        if let Some(j) = s.analytic_jet(u, v) {
            return Ok(j);
        }
    }
    let (su, sv) = (u.abs().max(1.0), v.abs().max(1.0));
    let hu = (cfg.h_first * su, cfg.h_second * su);
    let hv = (cfg.h_first * sv, cfg.h_second * sv);
    let (mu, mv) = (2.0 * hu.0.max(hu.1), 2.0 * hv.0.max(hv.1));
    let d = s.domain();
    if u - mu < d.u0 || u + mu > d.u1 || v - mv < d.v0 || v + mv > d.v1 {
        return Err(GeomError::TooCloseToBoundary { u, v });
    }
    Ok(fd_jet_steps(|a, b| s.point(a, b), u, v, hu, hv))
}

/// Central-difference jet: three-point first partials with step `h1`;
/// second partials with step `h2` from five-point stencils (the mixed one as
/// the product of two five-point first-derivative stencils).
pub fn fd_jet<F>(f: F, u: f64, v: f64, h1: f64, h2: f64) -> SurfaceJet
where
    F: Fn(f64, f64) -> Vec3,
{
    fd_jet_steps(f, u, v, (h1, h2), (h1, h2))
}

/// [`fd_jet`] with separate `(first, second)` steps in `u` and in `v`.
pub fn fd_jet_steps<F>(f: F, u: f64, v: f64, hu: (f64, f64), hv: (f64, f64)) -> SurfaceJet
where
    F: Fn(f64, f64) -> Vec3,
{
    let c = f(u, v);
    let five_point = |m2: Vec3, m1: Vec3, p1: Vec3, p2: Vec3, h: f64| {
        ((m1 + p1) * 16.0 - (m2 + p2) - c * 30.0) / (12.0 * h * h)
    };
    let (a1, a2) = hu;
    let (b1, b2) = hv;
    // tensor product of the five-point first-derivative stencil
    const W: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let mixed = || {
        let mut acc = Vec3::ZERO;
        for (i, wi) in W {
            for (k, wk) in W {
                acc += f(u + i * a2, v + k * b2) * (wi * wk);
            }
        }
        acc / (144.0 * a2 * b2)
    };
    SurfaceJet {
        f: c,
        fu: (f(u + a1, v) - f(u - a1, v)) / (2.0 * a1),
        fv: (f(u, v + b1) - f(u, v - b1)) / (2.0 * b1),
        fuu: five_point(f(u - 2.0 * a2, v), f(u - a2, v), f(u + a2, v), f(u + 2.0 * a2, v), a2),
        fvv: five_point(f(u, v - 2.0 * b2), f(u, v - b2), f(u, v + b2), f(u, v + 2.0 * b2), b2),
        fuv: mixed(),
    }
}

/// First form `(E, F, G)`, second form `(L, M, N)` in the chart basis, and
/// the unit normal `Fu × Fv / |Fu × Fv|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub normal: Vec3,
}

impl FundamentalForms {
    pub fn det_first(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// `I(x, y)` for chart vectors `x = x.0 ∂u + x.1 ∂v`.
    pub fn first_form(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        self.e * x.0 * y.0 + self.f * (x.0 * y.1 + x.1 * y.0) + self.g * x.1 * y.1
    }

    /// `II(x, y)` for chart vectors.
    pub fn second_form(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        self.l * x.0 * y.0 + self.m * (x.0 * y.1 + x.1 * y.0) + self.n * x.1 * y.1
    }

    /// Matrix of the shape operator `I⁻¹ II` acting on chart components.
    pub fn weingarten(&self) -> [[f64; 2]; 2] {
        let det = self.det_first();
        let (e, f, g, l, m, n) = (self.e, self.f, self.g, self.l, self.m, self.n);
        [
            [(g * l - f * m) / det, (g * m - f * n) / det],
            [(e * m - f * l) / det, (e * n - f * m) / det],
        ]
    }
}

pub fn fundamental_forms(j: &SurfaceJet) -> Result<FundamentalForms> {
    let cross = j.fu.cross(j.fv);
    let scale = j.fu.norm() * j.fv.norm();
    if !(cross.norm() > 1e-14 * scale.max(f64::MIN_POSITIVE)) {
        return Err(GeomError::DegeneratePoint);
    }
    let normal = cross / cross.norm();
    Ok(FundamentalForms {
        e: j.fu.dot(j.fu),
        f: j.fu.dot(j.fv),
        g: j.fv.dot(j.fv),
        l: j.fuu.dot(normal),
        m: j.fuv.dot(normal),
        n: j.fvv.dot(normal),
        normal,
    })
}

/// Principal curvatures closer than this are reported as an umbilic.
pub const UMBILIC_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrincipalDirections {
    Umbilic,
    /// Chart components `(du, dv)` of unit principal directions for `k1` and `k2`.
    Distinct([(f64, f64); 2]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub gaussian: f64,
    pub mean: f64,
    pub k1: f64,
    pub k2: f64,
    pub directions: PrincipalDirections,
}

pub fn curvatures(f: &FundamentalForms) -> Result<CurvatureReport> {
    let det = f.det_first();
    if !(det > 1e-14) {
        return Err(GeomError::DegeneratePoint);
    }
    let gaussian = (f.l * f.n - f.m * f.m) / det;
    let mean = (f.e * f.n - 2.0 * f.f * f.m + f.g * f.l) / (2.0 * det);
    let root = (mean * mean - gaussian).max(0.0).sqrt();
    let (k1, k2) = (mean + root, mean - root);
    let directions = if k1 - k2 < UMBILIC_EPS {
        PrincipalDirections::Umbilic
    } else {
        PrincipalDirections::Distinct([principal_direction(f, k1), principal_direction(f, k2)])
    };
    Ok(CurvatureReport { gaussian, mean, k1, k2, directions })
}

/// Unit (in the first form) null vector of `II − k I`.
fn principal_direction(f: &FundamentalForms, k: f64) -> (f64, f64) {
    let rows = [(f.l - k * f.e, f.m - k * f.f), (f.m - k * f.f, f.n - k * f.g)];
    let (a, b) = if rows[0].0.hypot(rows[0].1) >= rows[1].0.hypot(rows[1].1) {
        rows[0]
    } else {
        rows[1]
    };
    let w = (b, -a);
    let len = f.first_form(w, w).sqrt();
    (w.0 / len, w.1 / len)
}

/// Vector in the coordinate basis `∂r, ∂φ, ∂z` (not normalized: `|∂φ| = r`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CylVector {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylVector {
    pub const fn new(r: f64, phi: f64, z: f64) -> Self {
        Self { r, phi, z }
    }

    /// Cartesian components at the point `at`.
    pub fn to_cartesian(self, at: CylPoint) -> Vec3 {
        at.radial() * self.r + at.angular() * (at.r * self.phi) + Vec3::Z * self.z
    }

    /// `dr² + dz² + r² dφ²` inner product at radius `r`.
    pub fn warped_dot(self, other: CylVector, r: f64) -> f64 {
        self.r * other.r + self.z * other.z + r * r * self.phi * other.phi
    }
}

/// Value and coordinate partials `∂_r, ∂_φ, ∂_z` of a cylindrical vector field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CylFieldJet {
    pub value: CylVector,
    pub d_dr: CylVector,
    pub d_dphi: CylVector,
    pub d_dz: CylVector,
}

/// `∇_X Y` for the flat metric `dr² + dz² + r² dφ²`, whose only nonzero
/// Christoffel symbols are `Γ^φ_{rφ} = Γ^φ_{φr} = 1/r` and `Γ^r_{φφ} = −r`.
pub fn christoffel_cyl(p: CylPoint, x: CylVector, y: &CylFieldJet) -> Result<CylVector> {
    if !(p.r > 0.0) {
        return Err(GeomError::AxisPoint);
    }
    let deriv = |sel: fn(&CylVector) -> f64| {
        x.r * sel(&y.d_dr) + x.phi * sel(&y.d_dphi) + x.z * sel(&y.d_dz)
    };
    let yv = y.value;
    Ok(CylVector {
        r: deriv(|c| c.r) - p.r * x.phi * yv.phi,
        phi: deriv(|c| c.phi) + (x.r * yv.phi + x.phi * yv.r) / p.r,
        z: deriv(|c| c.z),
    })
}
