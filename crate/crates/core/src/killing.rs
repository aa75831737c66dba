//! Killing vector fields of Euclidean 3-space.
//!
//! The Killing algebra of E³ is six dimensional. A field is stored as its
//! coefficient vector over the ordered basis
//!
//! ```text
//! ∂x, ∂y, ∂z, −y∂x + x∂y, −z∂y + y∂z, z∂x − x∂z
//! ```
//!
//! i.e. the three translations followed by the rotations about the z-, x- and
//! y-axis.

use std::fmt;
use std::str::FromStr;

use crate::error::GeomError;
use crate::geom::Vec3;

/// Default central-difference step for [`killing_residual`].
pub const DEFAULT_RESIDUAL_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingField {
    pub coeffs: [f64; 6],
}

impl KillingField {
    pub const fn new(coeffs: [f64; 6]) -> Self {
        Self { coeffs }
    }

    /// The `i`-th basis field, `i` in `0..6`.
    pub fn basis(i: usize) -> Self {
        assert!(i < 6, "basis index {i} out of range");
        let mut coeffs = [0.0; 6];
        coeffs[i] = 1.0;
        Self { coeffs }
    }

    pub fn translation_x() -> Self {
        Self::basis(0)
    }

    pub fn translation_y() -> Self {
        Self::basis(1)
    }

    pub fn translation_z() -> Self {
        Self::basis(2)
    }

    /// `−y∂x + x∂y`, the rotation field about the z-axis.
    pub fn rot_z() -> Self {
        Self::basis(3)
    }

    /// `−z∂y + y∂z`.
    pub fn rot_x() -> Self {
        Self::basis(4)
    }

    /// `z∂x − x∂z`.
    pub fn rot_y() -> Self {
        Self::basis(5)
    }

    pub fn scaled(self, s: f64) -> Self {
        Self::new(self.coeffs.map(|a| a * s))
    }

    pub fn eval(&self, p: Vec3) -> Vec3 {
        killing_eval(self, p)
    }
}

/// Basis field `i` evaluated at `p`.
fn basis_at(i: usize, p: Vec3) -> Vec3 {
    match i {
        0 => Vec3::X,
        1 => Vec3::Y,
        2 => Vec3::Z,
        3 => Vec3::new(-p.y, p.x, 0.0),
        4 => Vec3::new(0.0, -p.z, p.y),
        5 => Vec3::new(p.z, 0.0, -p.x),
        _ => unreachable!(),
    }
}

pub fn killing_eval(field: &KillingField, p: Vec3) -> Vec3 {
    field
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .fold(Vec3::ZERO, |acc, (i, &a)| acc + basis_at(i, p) * a)
}

/// `⟨D_Y W, Z⟩ + ⟨D_Z W, Y⟩` at `p`, with the directional derivatives taken
/// by central differences of step `h`. Vanishes (up to O(h²) and rounding)
/// exactly when `W` satisfies the Killing equation at `p`.
pub fn killing_residual<W>(field: W, p: Vec3, y: Vec3, z: Vec3, h: f64) -> f64
where
    W: Fn(Vec3) -> Vec3,
{
    let directional = |dir: Vec3| (field(p + dir * h) - field(p - dir * h)) / (2.0 * h);
    directional(y).dot(z) + directional(z).dot(y)
}

const NAMES: [&str; 6] = ["dx", "dy", "dz", "rotZ", "rotX", "rotY"];

impl fmt::Display for KillingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<usize> = (0..6).filter(|&i| self.coeffs[i] != 0.0).collect();
        if let [i] = nonzero[..] {
            if self.coeffs[i] == 1.0 {
                return f.write_str(NAMES[i]);
            }
        }
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Accepts the basis names `dx`, `dy`, `dz`, `rotZ`, `rotX`, `rotY`, or six
/// comma-separated coefficients.
impl FromStr for KillingField {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(i) = NAMES.iter().position(|n| n.eq_ignore_ascii_case(s)) {
            return Ok(Self::basis(i));
        }
        let trimmed = s.trim_start_matches('[').trim_end_matches(']');
        let values: Vec<f64> = trimmed
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| GeomError::InvalidArgument(format!("unknown Killing field '{s}'")))?;
        let coeffs: [f64; 6] = values.try_into().map_err(|_| {
            GeomError::InvalidArgument(format!("Killing field '{s}' needs six coefficients"))
        })?;
        Ok(Self::new(coeffs))
    }
}
