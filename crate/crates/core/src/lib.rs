//! Relaxed area and relaxed Jacobian total variation of 0-homogeneous maps
//! `u(x) = γ(x/|x|)` built from BV boundary data `γ: S¹ → ℝ²`.

pub mod bv_curve;
pub mod geom;
pub mod homogeneous;
pub mod plateau;
pub mod relaxation_lab;

pub use bv_curve::{ClosedPolyline, Curve, CurveError, Side, VariationDecomposition};
pub use geom::Vec2;
