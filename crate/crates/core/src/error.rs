use std::io;

use thiserror::Error;

use crate::geom::Vec3;

/// Errors raised by the generators, the differential-geometry kernel and the
/// verifiers.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("zero-length vector has no direction")]
    ZeroVector,
    #[error("invalid parameter range [{start}, {end}]")]
    InvalidRange { start: f64, end: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("curve passes through the origin (rotation field vanishes there)")]
    OriginOnCurve,
    #[error("radius became non-positive at s = {0}")]
    RadiusNonPositive(f64),
    #[error("surface domain touches the z-axis")]
    DomainTouchesAxis,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("sign error: {0}")]
    SignError(String),
    #[error("point ({u}, {v}) is too close to the domain boundary for the difference stencil")]
    TooCloseToBoundary { u: f64, v: f64 },
    #[error("degenerate point: partial derivatives are linearly dependent")]
    DegeneratePoint,
    #[error("point lies on the axis of the cylindrical chart")]
    AxisPoint,
    #[error("Killing field vanishes at {0:?}")]
    KillingFieldVanishes(Vec3),
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
