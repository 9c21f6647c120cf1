//! Exact and floating planar geometry shared by every other module.
//!
//! Exact arithmetic is backed by GMP rationals (`rug`); all square-grid dynamics
//! runs over [`ExactScalar`] so orbit identities hold literally.

mod line;
mod scalar;
mod vector;

pub use line::{intersect_lines, GeomError, Line};
pub use scalar::{ExactScalar, ParseRationalError, Scalar};
pub use vector::{rational_circle_point, Mat2, Vec2};
