//! Cartesian and cylindrical point types and the angle between two vectors.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{GeomError, Result};

/// Norms below this are treated as zero by [`angle_between`].
pub const ZERO_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Unit vector in the same direction, or `None` for a (numerically) zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > ZERO_NORM).then(|| self / n)
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Rotation about the z-axis by `angle` (counter-clockwise seen from +z).
    pub fn rotate_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Point in cylindrical coordinates. `phi` is unbounded so that winding
/// curves keep a continuous angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylPoint {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylPoint {
    pub const fn new(r: f64, phi: f64, z: f64) -> Self {
        Self { r, phi, z }
    }

    pub fn to_cartesian(self) -> Vec3 {
        cyl_to_cart(self)
    }

    /// Unit radial direction `(cos phi, sin phi, 0)`.
    pub fn radial(self) -> Vec3 {
        let (s, c) = self.phi.sin_cos();
        Vec3::new(c, s, 0.0)
    }

    /// Unit angular direction `(-sin phi, cos phi, 0)`.
    pub fn angular(self) -> Vec3 {
        let (s, c) = self.phi.sin_cos();
        Vec3::new(-s, c, 0.0)
    }
}

pub fn cyl_to_cart(p: CylPoint) -> Vec3 {
    let (s, c) = p.phi.sin_cos();
    Vec3::new(p.r * c, p.r * s, p.z)
}

/// Inverse of [`cyl_to_cart`] with `phi` in `(-pi, pi]`.
pub fn cart_to_cyl(p: Vec3) -> CylPoint {
    CylPoint::new(p.x.hypot(p.y), p.y.atan2(p.x), p.z)
}

/// An angle in `[0, pi]`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(PI / 2.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=PI).contains(&value) {
            Ok(Angle(value))
        } else {
            Err(GeomError::InvalidArgument(format!(
                "angle {value} outside [0, pi]"
            )))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `min(a, pi - a)`: identifies an angle with its supplement, as happens
    /// when a normal is replaced by its negative.
    pub fn folded(self) -> Angle {
        Angle(self.0.min(PI - self.0))
    }
}

/// Unoriented angle between two nonzero vectors.
///
/// Evaluated as `atan2(|a x b|, a . b)`, which equals the clamped arccosine of
/// the normalized dot product but keeps full relative accuracy near 0 and pi.
pub fn angle_between(a: Vec3, b: Vec3) -> Result<Angle> {
    if a.norm() < ZERO_NORM || b.norm() < ZERO_NORM {
        return Err(GeomError::ZeroVector);
    }
    let value = a.cross(b).norm().atan2(a.dot(b));
    Ok(Angle(value.clamp(0.0, PI)))
}
