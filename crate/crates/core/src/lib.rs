//! Curves and surfaces of Euclidean 3-space that make a constant angle with
//! a Killing vector field, with numerical tools to generate, differentiate
//! and verify them.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod cli;
pub mod diffgeo;
pub mod error;
pub mod export;
pub mod geom;
pub mod killing;
pub mod quadrature;
pub mod surfaces;
pub mod verify;

pub use error::{GeomError, Result};
pub use geom::{angle_between, Angle, CylPoint, Vec3};
pub use killing::KillingField;
