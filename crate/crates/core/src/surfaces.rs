//! Surfaces making a constant angle with the rotation field `−y∂x + x∂y`:
//! vertical halfplanes, surfaces of revolution about the z-axis, right
//! cylinders over logarithmic spirals and Dini's surfaces.
//!
//! Every generator returns a [`ParamSurface`] with a closed-form 2-jet.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::diffgeo::{CylindricalJet, ScalarJet, SurfaceJet};
use crate::error::{GeomError, Result};
use crate::geom::{cyl_to_cart, CylPoint, Vec3};

pub type PointFn = Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>;
pub type JetFn = Arc<dyn Fn(f64, f64) -> SurfaceJet + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default distance of the Dini parameter band from the axis (`cu = 0`) and
/// from the cuspidal rim (`cu = π/2`).
pub const DEFAULT_RIM_MARGIN: f64 = 0.1;

/// Parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Domain {
    pub const fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Self { u0, u1, v0, v1 }
    }

    fn validate(&self) -> Result<()> {
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && b > a;
        if !ok(self.u0, self.u1) {
            return Err(GeomError::InvalidRange { start: self.u0, end: self.u1 });
        }
        if !ok(self.v0, self.v1) {
            return Err(GeomError::InvalidRange { start: self.v0, end: self.v1 });
        }
        Ok(())
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        (self.u0..=self.u1).contains(&u) && (self.v0..=self.v1).contains(&v)
    }

    /// `n` equally spaced values spanning `[u0, u1]` (endpoints included).
    pub fn u_nodes(&self, n: usize) -> Vec<f64> {
        crate::quadrature::uniform_grid(self.u0, self.u1, n)
    }

    pub fn v_nodes(&self, n: usize) -> Vec<f64> {
        crate::quadrature::uniform_grid(self.v0, self.v1, n)
    }

    /// Cell-centred interior samples `u0 + (i + ½)(u1 − u0)/n`.
    pub fn u_centers(&self, n: usize) -> Vec<f64> {
        centers(self.u0, self.u1, n)
    }

    pub fn v_centers(&self, n: usize) -> Vec<f64> {
        centers(self.v0, self.v1, n)
    }
}

fn centers(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + h * (i as f64 + 0.5)).collect()
}

/// Which family a generated surface belongs to, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Halfplane { phi0: f64 },
    Rotational { profile: String },
    LogSpiralCylinder { theta: f64, c: f64 },
    Dini { theta: f64, c: f64 },
    Custom(String),
}

impl Family {
    pub fn name(&self) -> &str {
        match self {
            Family::Halfplane { .. } => "halfplane",
            Family::Rotational { .. } => "rotational",
            Family::LogSpiralCylinder { .. } => "logspiral-cylinder",
            Family::Dini { .. } => "dini",
            Family::Custom(name) => name,
        }
    }
}

/// Parametric surface over a rectangle, optionally with an analytic 2-jet.
#[derive(Clone)]
pub struct ParamSurface {
    family: Family,
    domain: Domain,
    point: PointFn,
    jet: Option<JetFn>,
}

impl fmt::Debug for ParamSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSurface")
            .field("family", &self.family)
            .field("domain", &self.domain)
            .field("analytic_jet", &self.jet.is_some())
            .finish()
    }
}

impl ParamSurface {
    /// Surface given only by its point map; derivatives come from finite differences.
    pub fn custom<F>(name: &str, domain: Domain, f: F) -> Self
    where
        F: Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
    {
        Self { family: Family::Custom(name.to_string()), domain, point: Arc::new(f), jet: None }
    }

    /// Surface with an analytic jet; the point map is the jet's position.
    pub fn from_jet<J>(family: Family, domain: Domain, jet: J) -> Self
    where
        J: Fn(f64, f64) -> SurfaceJet + Send + Sync + 'static,
    {
        let jet: JetFn = Arc::new(jet);
        let j = jet.clone();
        Self { family, domain, point: Arc::new(move |u, v| j(u, v).f), jet: Some(jet) }
    }

    fn from_cylindrical<J>(family: Family, domain: Domain, cyl: J) -> Self
    where
        J: Fn(f64, f64) -> CylindricalJet + Send + Sync + 'static,
    {
        Self::from_jet(family, domain, move |u, v| cyl(u, v).to_cartesian())
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        (self.point)(u, v)
    }

    pub fn analytic_jet(&self, u: f64, v: f64) -> Option<SurfaceJet> {
        self.jet.as_ref().map(|j| j(u, v))
    }

    pub fn has_analytic_jet(&self) -> bool {
        self.jet.is_some()
    }

    /// Same surface with the jet discarded, so that every derivative is
    /// computed by finite differences.
    pub fn without_analytic_jet(&self) -> Self {
        Self { jet: None, ..self.clone() }
    }

    /// The reparametrization `(u, v) ↦ F(u0 + u1 − u, v)`, which has the
    /// opposite normal orientation.
    pub fn reversed_u(&self) -> Self {
        let Domain { u0, u1, .. } = self.domain;
        let point = self.point.clone();
        let jet = self.jet.clone().map(|j| -> JetFn {
            Arc::new(move |u, v| j(u0 + u1 - u, v).reversed_u())
        });
        Self {
            family: self.family.clone(),
            domain: self.domain,
            point: Arc::new(move |u, v| point(u0 + u1 - u, v)),
            jet,
        }
    }

    /// Vertex grid of `nu × nv` points (row-major in `u`), endpoints included.
    pub fn grid_points(&self, nu: usize, nv: usize) -> Vec<Vec3> {
        let (us, vs) = (self.domain.u_nodes(nu), self.domain.v_nodes(nv));
        us.iter()
            .flat_map(|&u| vs.iter().map(move |&v| (u, v)))
            .map(|(u, v)| self.point(u, v))
            .collect()
    }

    /// Checks that the map is an immersion away from the z-axis on an
    /// `nu × nv` vertex grid: central-difference partials with step
    /// `1e−6·max(1, |u|, |v|)` (one-sided at the edges) must have a cross product
    /// of norm above `1e−10`, and every point must have positive distance
    /// to the axis.
    pub fn check_immersion(&self, nu: usize, nv: usize) -> Result<()> {
        let d = self.domain;
        for u in d.u_nodes(nu) {
            for v in d.v_nodes(nv) {
                let p = self.point(u, v);
                if p.x.hypot(p.y) <= 1e-12 {
                    return Err(GeomError::DomainTouchesAxis);
                }
                let h = 1e-6 * 1f64.max(u.abs()).max(v.abs());
                let diff = |a0: f64, a1: f64, b0: f64, b1: f64| {
                    (self.point(a1, b1) - self.point(a0, b0)) / (2.0 * h)
                };
                let (ul, uh) = ((u - h).max(d.u0), (u + h).min(d.u1));
                let (vl, vh) = ((v - h).max(d.v0), (v + h).min(d.v1));
                let fu = diff(ul, uh, v, v) * (2.0 * h / (uh - ul));
                let fv = diff(u, u, vl, vh) * (2.0 * h / (vh - vl));
                if fu.cross(fv).norm() <= 1e-10 {
                    return Err(GeomError::DegeneratePoint);
                }
            }
        }
        Ok(())
    }
}

fn require_off_axis(domain: &Domain) -> Result<()> {
    domain.validate()?;
    if domain.u0 <= 0.0 {
        return Err(GeomError::DomainTouchesAxis);
    }
    Ok(())
}

fn require_theta_open(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(GeomError::InvalidArgument(format!("theta = {theta} must lie in (0, pi/2)")))
    }
}

/// Vertical halfplane `F(u, v) = (u cos φ0, u sin φ0, v)`, `u > 0`.
pub fn halfplane(phi0: f64, domain: Domain) -> Result<ParamSurface> {
    require_off_axis(&domain)?;
    Ok(ParamSurface::from_cylindrical(Family::Halfplane { phi0 }, domain, move |u, v| {
        CylindricalJet {
            r: ScalarJet { value: u, du: 1.0, ..Default::default() },
            phi: ScalarJet::constant(phi0),
            z: ScalarJet { value: v, dv: 1.0, ..Default::default() },
        }
    }))
}

pub fn default_halfplane_domain() -> Domain {
    Domain::new(0.2, 2.0, -1.0, 1.0)
}

/// Meridian `z = f(r)` of a surface of revolution, with optional closed-form
/// first and second derivatives.
#[derive(Clone)]
pub struct Profile {
    name: String,
    f: ScalarFn,
    derivatives: Option<(ScalarFn, ScalarFn)>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.name)
    }
}

impl Profile {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), f: Arc::new(f), derivatives: None }
    }

    pub fn with_derivatives<F, D1, D2>(name: &str, f: F, df: D1, d2f: D2) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), f: Arc::new(f), derivatives: Some((Arc::new(df), Arc::new(d2f))) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    /// `z = 0`: the horizontal plane.
    pub fn plane() -> Self {
        Self::with_derivatives("plane", |_| 0.0, |_| 0.0, |_| 0.0)
    }

    /// `z = slope · r`: a circular cone.
    pub fn cone(slope: f64) -> Self {
        Self::with_derivatives("cone", move |r| slope * r, move |_| slope, |_| 0.0)
    }

    /// `z = a r²`.
    pub fn paraboloid(a: f64) -> Self {
        Self::with_derivatives("paraboloid", move |r| a * r * r, move |r| 2.0 * a * r, move |_| 2.0 * a)
    }

    /// Upper half of the catenoid `r = a cosh(z / a)`, i.e. `z = a arcosh(r / a)`,
    /// defined for `r > a`.
    pub fn catenoid(a: f64) -> Self {
        Self::with_derivatives(
            "catenoid",
            move |r| a * (r / a).acosh(),
            move |r| 1.0 / ((r / a).powi(2) - 1.0).sqrt(),
            move |r| -(r / (a * a)) / ((r / a).powi(2) - 1.0).powf(1.5),
        )
    }
}

/// Surface of revolution `F(u, v) = (u cos v, u sin v, f(u))`, `u > 0`.
pub fn rotational_surface(profile: Profile, domain: Domain) -> Result<ParamSurface> {
    require_off_axis(&domain)?;
    let family = Family::Rotational { profile: profile.name.clone() };
    let Profile { f, derivatives, .. } = profile;
    Ok(match derivatives {
        Some((df, d2f)) => ParamSurface::from_cylindrical(family, domain, move |u, v| CylindricalJet {
            r: ScalarJet { value: u, du: 1.0, ..Default::default() },
            phi: ScalarJet { value: v, dv: 1.0, ..Default::default() },
            z: ScalarJet { value: f(u), du: df(u), duu: d2f(u), ..Default::default() },
        }),
        None => ParamSurface {
            family,
            domain,
            point: Arc::new(move |u, v| cyl_to_cart(CylPoint::new(u, v, f(u)))),
            jet: None,
        },
    })
}

pub fn default_rotational_domain() -> Domain {
    Domain::new(0.5, 2.0, 0.0, 2.0 * PI)
}

/// Catenoid `(a cosh(t/a) cos v, a cosh(t/a) sin v, t)` with waist radius
/// `a`, smooth across the waist.
pub fn catenoid(scale: f64, domain: Domain) -> Result<ParamSurface> {
    domain.validate()?;
    if !(scale > 0.0) {
        return Err(GeomError::InvalidArgument(format!("catenoid scale {scale} must be positive")));
    }
    let family = Family::Rotational { profile: "catenoid".into() };
    Ok(ParamSurface::from_cylindrical(family, domain, move |t, v| {
        let (ch, sh) = ((t / scale).cosh(), (t / scale).sinh());
        CylindricalJet {
            r: ScalarJet { value: scale * ch, du: sh, duu: ch / scale, ..Default::default() },
            phi: ScalarJet { value: v, dv: 1.0, ..Default::default() },
            z: ScalarJet { value: t, du: 1.0, ..Default::default() },
        }
    }))
}

pub fn default_catenoid_domain(scale: f64) -> Domain {
    Domain::new(-scale, scale, 0.0, 2.0 * PI)
}

/// Right cylinder over a logarithmic spiral: cylindrical components
/// `r = u cosθ`, `φ = ln c − tanθ ln u`, `z = v`.
pub fn logspiral_cylinder(theta: f64, c: f64, domain: Domain) -> Result<ParamSurface> {
    require_theta_open(theta)?;
    if !(c > 0.0) {
        return Err(GeomError::InvalidArgument(format!("c = {c} must be positive")));
    }
    require_off_axis(&domain)?;
    let (ct, tt) = (theta.cos(), theta.tan());
    let lc = c.ln();
    Ok(ParamSurface::from_cylindrical(Family::LogSpiralCylinder { theta, c }, domain, move |u, v| {
        CylindricalJet {
            r: ScalarJet { value: u * ct, du: ct, ..Default::default() },
            phi: ScalarJet { value: lc - tt * u.ln(), du: -tt / u, duu: tt / (u * u), ..Default::default() },
            z: ScalarJet { value: v, dv: 1.0, ..Default::default() },
        }
    }))
}

pub fn default_logspiral_domain() -> Domain {
    Domain::new(0.2, 2.0, -1.0, 1.0)
}

/// Angle and scale of a Dini surface, `θ ∈ (0, π/2)`, `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiniParams {
    pub theta: f64,
    pub c: f64,
}

impl DiniParams {
    pub fn new(theta: f64, c: f64) -> Result<Self> {
        require_theta_open(theta)?;
        if c == 0.0 || !c.is_finite() {
            return Err(GeomError::InvalidArgument(format!("c = {c} must be a nonzero real")));
        }
        if c < 0.0 {
            return Err(GeomError::SignError(format!(
                "c = {c} < 0 makes the radius cosθ sin(cu)/c negative on the band 0 < cu < pi/2"
            )));
        }
        Ok(Self { theta, c })
    }

    /// `[ε/c, (π/2 − ε)/c]`.
    pub fn u_band(&self, margin: f64) -> (f64, f64) {
        (margin / self.c, (FRAC_PI_2 - margin) / self.c)
    }

    /// Band in `u` with the default margin and one full turn in `v`.
    pub fn default_domain(&self) -> Domain {
        let (u0, u1) = self.u_band(DEFAULT_RIM_MARGIN);
        Domain::new(u0, u1, 0.0, self.helix_pitch().abs())
    }

    /// Rise per full turn of the `v`-curves, `−2π cosθ / (c tanθ)`.
    pub fn helix_pitch(&self) -> f64 {
        -2.0 * PI * self.theta.cos() / (self.c * self.theta.tan())
    }

    /// Radius `cosθ / c` of the spheres carrying the `u`-curves.
    pub fn sphere_radius(&self) -> f64 {
        self.theta.cos() / self.c
    }

    /// `u` must satisfy `0 < cu < π/2`.
    pub fn check_u(&self, u: f64) -> Result<()> {
        let cu = self.c * u;
        if cu > 0.0 && cu < FRAC_PI_2 {
            Ok(())
        } else {
            Err(GeomError::DomainViolation(format!(
                "cu = {cu} outside (0, pi/2) for c = {}",
                self.c
            )))
        }
    }

    /// Cylindrical jet of the surface. With `signed_radius` the radial
    /// component is the signed `μ = −cosθ sin(cu)/c`, which describes the same
    /// surface turned by π about the z-axis.
    pub fn cylindrical_jet(&self, u: f64, v: f64, signed_radius: bool) -> CylindricalJet {
        let (c, (st, ct)) = (self.c, self.theta.sin_cos());
        let tt = st / ct;
        let (s, co) = (c * u).sin_cos();
        let r = ScalarJet { value: ct * s / c, du: ct * co, duu: -c * ct * s, ..Default::default() };
        CylindricalJet {
            r: if signed_radius { r.negated() } else { r },
            phi: ScalarJet {
                value: -c * v * tt / ct - tt * (0.5 * c * u).tan().ln(),
                du: -c * tt / s,
                dv: -c * tt / ct,
                duu: c * c * tt * co / (s * s),
                ..Default::default()
            },
            z: ScalarJet { value: v - ct * co / c, du: ct * s, dv: 1.0, duu: c * ct * co, ..Default::default() },
        }
    }
}

/// Dini's surface in cylindrical coordinates:
///
/// ```text
/// r = cosθ sin(cu) / c
/// φ = −c v tanθ / cosθ − tanθ ln tan(cu/2)
/// z = v − cosθ cos(cu) / c
/// ```
///
/// The `u`-interval must lie in `[ε/c, (π/2 − ε)/c]` with the default rim
/// margin ε; see [`dini_surface_with_margin`].
pub fn dini_surface(theta: f64, c: f64, domain: Domain) -> Result<ParamSurface> {
    dini_surface_with_margin(theta, c, domain, DEFAULT_RIM_MARGIN)
}

pub fn dini_surface_with_margin(theta: f64, c: f64, domain: Domain, margin: f64) -> Result<ParamSurface> {
    let params = DiniParams::new(theta, c)?;
    domain.validate()?;
    if !(margin > 0.0 && margin < FRAC_PI_2 / 2.0) {
        return Err(GeomError::InvalidArgument(format!("rim margin {margin} outside (0, pi/4)")));
    }
    let (lo, hi) = params.u_band(margin);
    let slack = 1e-12 * hi;
    if domain.u0 < lo - slack || domain.u1 > hi + slack {
        return Err(GeomError::DomainViolation(format!(
            "u-interval [{}, {}] leaves the band [{lo}, {hi}]",
            domain.u0, domain.u1
        )));
    }
    Ok(ParamSurface::from_cylindrical(Family::Dini { theta, c }, domain, move |u, v| {
        params.cylindrical_jet(u, v, false)
    }))
}

/// Dini's surface as a helicoidal surface `(r cos φ, r sin φ, hφ + Λ(r))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicoidalForm {
    pub params: DiniParams,
    /// `h = −cosθ / (c tanθ)`.
    pub pitch: f64,
}

impl HelicoidalForm {
    /// `Λ(r) = −(cosθ/c)(ln tan(w/2) + cos w)` with `sin w = c r / cosθ`,
    /// `w ∈ (0, π/2]`.
    pub fn profile(&self, r: f64) -> f64 {
        let DiniParams { theta, c } = self.params;
        let w = (c * r / theta.cos()).clamp(-1.0, 1.0).asin();
        -(theta.cos() / c) * ((0.5 * w).tan().ln() + w.cos())
    }

    pub fn point(&self, r: f64, phi: f64) -> Vec3 {
        cyl_to_cart(CylPoint::new(r, phi, self.pitch * phi + self.profile(r)))
    }
}

pub fn helicoidal_form(theta: f64, c: f64) -> Result<HelicoidalForm> {
    let params = DiniParams::new(theta, c)?;
    Ok(HelicoidalForm { params, pitch: -theta.cos() / (c * theta.tan()) })
}

/// Closed-form inner geometry of Dini's surface at `(u, v)`.
///
/// Radial quantities use the signed `μ = −cosθ sin(cu)/c`; frame vectors are
/// components in `∂r, ∂φ, ∂z` of the signed-radius chart (see
/// [`DiniParams::cylindrical_jet`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiniGeometry {
    pub psi: f64,
    pub mu: f64,
    pub lambda: f64,
    /// `e2 = a ∂u + b ∂v`.
    pub a: f64,
    pub b: f64,
    pub e1: crate::diffgeo::CylVector,
    pub e2: crate::diffgeo::CylVector,
    pub normal: crate::diffgeo::CylVector,
    /// `cos ∠(N, k) = −sinθ sinψ` (branch as stated; the sign is not fixed).
    pub cos_normal_vertical: f64,
    /// `cos ∠(e1, k) = cosθ sinψ` (same caveat).
    pub cos_e1_vertical: f64,
    /// Shape operator diagonal in the frame `e1, e2`: `−sinθ cosψ / μ` and `λ`.
    pub shape_frame: [f64; 2],
    /// Second fundamental form in the chart basis `∂u, ∂v`.
    pub h_chart: [[f64; 2]; 2],
}

impl DiniGeometry {
    /// Gaussian curvature from the frame diagonal.
    pub fn gaussian(&self) -> f64 {
        self.shape_frame[0] * self.shape_frame[1]
    }

    /// A frame vector of the signed chart as a Cartesian vector at the
    /// corresponding point of [`dini_surface`].
    pub fn to_surface_cartesian(&self, vector: crate::diffgeo::CylVector, phi: f64) -> Vec3 {
        // the signed chart is the surface turned by π about the axis
        let at = CylPoint::new(self.mu, phi, 0.0);
        let w = vector.to_cartesian(at);
        Vec3::new(-w.x, -w.y, w.z)
    }
}

pub fn dini_geometry(theta: f64, c: f64, u: f64, v: f64) -> Result<DiniGeometry> {
    use crate::diffgeo::CylVector;
    let params = DiniParams::new(theta, c)?;
    params.check_u(u)?;
    let _ = v;
    let (st, ct) = theta.sin_cos();
    let tt = st / ct;
    let psi = c * u;
    let (sp, cp) = psi.sin_cos();
    let mu = -ct * sp / c;
    let lambda = -c * tt * psi.tan();
    Ok(DiniGeometry {
        psi,
        mu,
        lambda,
        a: -psi.tan() / ct,
        b: 1.0 / cp,
        e1: CylVector::new(-ct * cp, st / mu, ct * sp),
        e2: CylVector::new(sp, 0.0, cp),
        normal: CylVector::new(st * cp, ct / mu, -st * sp),
        cos_normal_vertical: -st * sp,
        cos_e1_vertical: ct * sp,
        shape_frame: [-st * cp / mu, lambda],
        h_chart: [
            [c * tt * cp / sp, c * tt * cp / ct],
            [c * tt * cp / ct, c * tt.powi(3) * sp * cp],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::{curvatures, fd_jet, fundamental_forms, CylVector, PrincipalDirections};
    use crate::geom::{angle_between, cart_to_cyl};
    use crate::killing::KillingField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn dini(theta: f64, c: f64) -> ParamSurface {
        dini_surface(theta, c, DiniParams::new(theta, c).unwrap().default_domain()).unwrap()
    }

    fn folded_angle(s: &ParamSurface, u: f64, v: f64) -> f64 {
        let j = s.analytic_jet(u, v).unwrap();
        let n = j.fu.cross(j.fv);
        angle_between(KillingField::rot_z().eval(j.f), n).unwrap().folded().radians()
    }

    #[test]
    fn halfplane_examples() {
        let s = halfplane(0.0, default_halfplane_domain()).unwrap();
        assert_eq!(s.point(1.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        let j = s.analytic_jet(0.7, 0.2).unwrap();
        let n = j.fu.cross(j.fv).normalized().unwrap();
        assert!((n.y.abs() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (u, v) = (rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            assert_eq!(folded_angle(&s, u, v), 0.0);
        }
        assert!(matches!(
            halfplane(0.3, Domain::new(0.0, 1.0, 0.0, 1.0)),
            Err(GeomError::DomainTouchesAxis)
        ));
    }

    #[test]
    fn rotational_examples() {
        let plane = rotational_surface(Profile::plane(), default_rotational_domain()).unwrap();
        assert!((folded_angle(&plane, 1.0, 0.4) - FRAC_PI_2).abs() < 1e-15);
        let cone = rotational_surface(Profile::cone(1.0), default_rotational_domain()).unwrap();
        let c = curvatures(&fundamental_forms(&cone.analytic_jet(1.2, 2.0).unwrap()).unwrap()).unwrap();
        assert!(c.gaussian.abs() < 1e-14);
        assert!((folded_angle(&cone, 1.2, 2.0) - FRAC_PI_2).abs() < 1e-15);
        assert!(rotational_surface(Profile::plane(), Domain::new(-1.0, 1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn catenoid_profile_and_preset_are_minimal() {
        let graph = rotational_surface(Profile::catenoid(1.0), Domain::new(1.1, 3.0, 0.0, 6.0)).unwrap();
        let preset = catenoid(1.0, default_catenoid_domain(1.0)).unwrap();
        for (s, u) in [(&graph, 1.5), (&graph, 2.7), (&preset, -0.6), (&preset, 0.9)] {
            let c = curvatures(&fundamental_forms(&s.analytic_jet(u, 1.0).unwrap()).unwrap()).unwrap();
            assert!(c.mean.abs() < 1e-12, "{}", c.mean);
        }
    }

    #[test]
    fn fd_profile_falls_back() {
        let s = rotational_surface(Profile::new("bump", |r| (-r * r).exp()), default_rotational_domain()).unwrap();
        assert!(!s.has_analytic_jet());
        assert!((s.point(1.0, 0.0) - Vec3::new(1.0, 0.0, (-1.0f64).exp())).norm() < 1e-15);
    }

    #[test]
    fn logspiral_cylinder_examples() {
        let s = logspiral_cylinder(FRAC_PI_4, 1.0, default_logspiral_domain()).unwrap();
        let p = s.point(1.0, 0.0);
        assert!((p - Vec3::new(FRAC_PI_4.cos(), 0.0, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (u, v) = (rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let j = s.analytic_jet(u, v).unwrap();
            assert_eq!(j.fv, Vec3::Z);
            assert!((folded_angle(&s, u, v) - FRAC_PI_4).abs() < 1e-12);
            let fd = fd_jet(|a, b| s.point(a, b), u, v, 1e-6, 1e-3);
            let n = fd.fu.cross(fd.fv);
            let a = angle_between(KillingField::rot_z().eval(fd.f), n).unwrap().folded().radians();
            assert!((a - FRAC_PI_4).abs() < 1e-6);
        }
        assert!(logspiral_cylinder(0.0, 1.0, default_logspiral_domain()).is_err());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn dini_point_matches_high_precision_value() {
        let s = dini_surface(FRAC_PI_3, 1.0, Domain::new(0.1, FRAC_PI_2 - 0.1, -1.0, 1.0)).unwrap();
        let p = s.point(FRAC_PI_2 - 0.1, 0.0);
        // 30-digit evaluation of the closed form
        let expect = Vec3::new(0.490033355587287205, 0.0858815034918377498, -0.0499167083234140762);
        assert!((p - expect).norm() < 1e-15, "{:?}", p - expect);
        let q = cart_to_cyl(p);
        assert!((q.r - 0.497502082639012883).abs() < 1e-15);
        assert!((q.phi - 0.173494479682283060).abs() < 1e-14);
    }

    #[test]
    fn dini_domain_and_sign_errors() {
        let d = Domain::new(0.05, 1.0, 0.0, 1.0);
        assert!(matches!(dini_surface(FRAC_PI_3, 1.0, d), Err(GeomError::DomainViolation(_))));
        assert!(matches!(
            dini_surface(FRAC_PI_3, -1.0, Domain::new(-1.0, -0.5, 0.0, 1.0)),
            Err(GeomError::SignError(_))
        ));
        assert!(dini_surface(FRAC_PI_3, 0.0, d).is_err());
        assert!(dini_surface(1.6, 1.0, d).is_err());
    }

    #[test]
    fn dini_on_sphere_and_constant_angle() {
        let p = DiniParams::new(FRAC_PI_3, 1.0).unwrap();
        let s = dini_surface(p.theta, p.c, p.default_domain()).unwrap();
        let d = s.domain();
        for u in d.u_nodes(9) {
            for v in d.v_nodes(9) {
                let q = s.point(u, v);
                assert!(((q - Vec3::new(0.0, 0.0, v)).norm() - 0.5).abs() < 1e-14);
                if u > d.u0 && u < d.u1 {
                    assert!((folded_angle(&s, u, v) - FRAC_PI_3).abs() < 1e-13);
                }
            }
        }
        s.check_immersion(16, 16).unwrap();
    }

    #[test]
    fn dini_analytic_jet_matches_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = dini_surface(FRAC_PI_3, 1.0, DiniParams::new(FRAC_PI_3, 1.0).unwrap().default_domain()).unwrap();
        let d = s.domain();
        for _ in 0..100 {
            let u = rng.gen_range(d.u0 + 0.01..d.u1 - 0.01);
            let v = rng.gen_range(d.v0 + 0.01..d.v1 - 0.01);
            let a = s.analytic_jet(u, v).unwrap();
            let f = fd_jet(|x, y| s.point(x, y), u, v, 1e-6, 1e-3);
            for (x, y) in [(a.fu, f.fu), (a.fv, f.fv)] {
                assert!((x - y).max_abs() < 1e-8, "{:?}", x - y);
            }
            // O(h²) truncation with h = 1e-3
            for (x, y) in [(a.fuu, f.fuu), (a.fuv, f.fuv), (a.fvv, f.fvv)] {
                assert!((x - y).max_abs() < 1e-4 * x.max_abs().max(1.0), "{:?}", x - y);
            }
        }
    }

    #[test]
    fn dini_fd_jet_at_reference_point() {
        let s = dini(FRAC_PI_3, 1.0);
        let a = s.analytic_jet(0.8, 0.3).unwrap();
        let f = crate::diffgeo::jet(&s, 0.8, 0.3, &crate::diffgeo::JetConfig::finite_difference()).unwrap();
        for (x, y) in [(a.fu, f.fu), (a.fv, f.fv), (a.fuu, f.fuu), (a.fuv, f.fuv), (a.fvv, f.fvv)] {
            assert!((x - y).max_abs() < 1e-6, "{:?}", x - y);
        }
    }

    #[test]
    fn dini_shape_operator_matches_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..40 {
            let (theta, c) = (rng.gen_range(0.2..1.3), rng.gen_range(0.3..3.0));
            let params = DiniParams::new(theta, c).unwrap();
            let (u0, u1) = params.u_band(0.1);
            let (u, v) = (rng.gen_range(u0..u1), rng.gen_range(-2.0..2.0));
            let g = dini_geometry(theta, c, u, v).unwrap();
            let j = dini(theta, c).analytic_jet(u, v).unwrap();
            let ff = fundamental_forms(&j).unwrap();
            // the normal orientation fixes only a global sign
            let sign = (ff.l * g.h_chart[0][0]).signum();
            for (x, y) in [(ff.l, g.h_chart[0][0]), (ff.m, g.h_chart[0][1]), (ff.n, g.h_chart[1][1])] {
                assert!((sign * x - y).abs() < 1e-5 * y.abs().max(1.0), "{x} vs {y}");
            }
            let k = curvatures(&ff).unwrap();
            let mut got = [sign * k.k1, sign * k.k2];
            let mut want = g.shape_frame;
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            for (x, y) in got.iter().zip(&want) {
                assert!((x - y).abs() < 1e-5 * y.abs().max(1.0), "{x} vs {y}");
            }
            let PrincipalDirections::Distinct(dirs) = k.directions else { panic!("umbilic") };
            let e1 = j.fu;
            let e2 = (j.fu * g.a + j.fv * g.b).normalized().unwrap();
            for ((du, dv), kk) in dirs.into_iter().zip([k.k1, k.k2]) {
                let d = (j.fu * du + j.fv * dv).normalized().unwrap();
                let target = if ((sign * kk) - g.shape_frame[0]).abs() < ((sign * kk) - g.shape_frame[1]).abs() { e1 } else { e2 };
                let ang = d.cross(target).norm().asin();
                assert!(ang < 1e-4, "direction off by {ang}");
            }
        }
    }

    #[test]
    fn helicoidal_pitch_and_reconstruction() {
        let h = helicoidal_form(FRAC_PI_4, 1.0).unwrap();
        assert!((h.pitch + FRAC_PI_4.cos()).abs() < 1e-15);
        assert!(helicoidal_form(FRAC_PI_2 - 1e-9, 1.0).unwrap().pitch.abs() < 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (theta, c) in [(FRAC_PI_4, 1.0), (0.3, 2.5), (1.2, 0.4)] {
            let params = DiniParams::new(theta, c).unwrap();
            let s = dini_surface(theta, c, params.default_domain()).unwrap();
            let h = helicoidal_form(theta, c).unwrap();
            let d = s.domain();
            for _ in 0..50 {
                let (u, v) = (rng.gen_range(d.u0..d.u1), rng.gen_range(d.v0..d.v1));
                let cyl = params.cylindrical_jet(u, v, false);
                let q = h.point(cyl.r.value, cyl.phi.value);
                assert!((q - s.point(u, v)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn dini_geometry_examples() {
        let g = dini_geometry(FRAC_PI_3, 1.0, FRAC_PI_4, 0.0).unwrap();
        assert!((g.psi - FRAC_PI_4).abs() < 1e-15);
        assert!((g.lambda + 3f64.sqrt()).abs() < 1e-14);
        assert!((g.gaussian() + 3.0).abs() < 1e-13);
        let g = dini_geometry(FRAC_PI_3, 1.0, FRAC_PI_3, 0.0).unwrap();
        assert!((g.b - 2.0).abs() < 1e-14);
        assert!(matches!(dini_geometry(FRAC_PI_3, 1.0, 2.0, 0.0), Err(GeomError::DomainViolation(_))));
    }

    #[test]
    fn dini_frame_is_orthonormal_and_matches_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let theta = rng.gen_range(0.2..1.3);
            let c = rng.gen_range(0.3..3.0);
            let params = DiniParams::new(theta, c).unwrap();
            let (u0, u1) = params.u_band(0.1);
            let (u, v) = (rng.gen_range(u0..u1), rng.gen_range(-2.0..2.0));
            let g = dini_geometry(theta, c, u, v).unwrap();
            let frame = [g.e1, g.e2, g.normal];
            for i in 0..3 {
                for k in 0..3 {
                    let d = frame[i].warped_dot(frame[k], g.mu);
                    assert!((d - if i == k { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
            // e1 = ∂u, e2 = a∂u + b∂v, N ∥ Fu × Fv
            let s = dini_surface(theta, c, params.default_domain()).unwrap();
            let j = s.analytic_jet(u, v).unwrap();
            let phi = params.cylindrical_jet(u, v, true).phi.value;
            let e1 = g.to_surface_cartesian(g.e1, phi);
            let e2 = g.to_surface_cartesian(g.e2, phi);
            let n = g.to_surface_cartesian(g.normal, phi);
            assert!((e1 - j.fu).norm() < 1e-12);
            assert!((e2 - (j.fu * g.a + j.fv * g.b)).norm() < 1e-10 * g.b.abs().max(1.0));
            let cross = j.fu.cross(j.fv).normalized().unwrap();
            assert!((n - cross).norm() < 1e-12 || (n + cross).norm() < 1e-12);
            assert!((g.cos_normal_vertical.abs() - n.z.abs()).abs() < 1e-12);
            assert!((g.cos_e1_vertical.abs() - e1.z.abs()).abs() < 1e-12);
            let _ = CylVector::default();
        }
    }
}
