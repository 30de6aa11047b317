//! Planar Plateau value of closed Lipschitz curves.
//!
//! The value is bracketed from below by the winding-number area
//! `∫|deg(φ, y)| dy` and from above by a discrete minimizer of `∫|Jv|`.

mod arrangement;
mod grid;
mod mesh;
mod minimize;
mod winding;

use serde::Serialize;
use thiserror::Error;

pub use arrangement::{winding_area, Arrangement, Cell, Face};
pub use grid::{winding_area_grid, GridEstimate};
pub use mesh::{make_disk_mesh, make_disk_mesh_with_angles, TriMesh};
pub use minimize::{
    homogeneous_guess, jacobian_tv_minimize, minimize_from, DiscreteMap, Minimized, DEFAULT_DELTAS,
    DEFAULT_MAX_ITERS, GRAD_TOL,
};
pub use winding::{winding_number, winding_number_angle_sum, SNAP_REL};

use crate::bv_curve::{completed_curve, ClosedPolyline, Curve};
use crate::geom::{normalize_angle, TAU};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlateauError {
    #[error("point ({}, {}) lies on the curve (distance {distance:e})", point[0], point[1])]
    PointOnCurve { point: [f64; 2], distance: f64 },
    #[error("segments {first:?} and {second:?} meet below the snap tolerance")]
    ArrangementFailure { first: [[f64; 2]; 2], second: [[f64; 2]; 2] },
    #[error("curve is not closed: winding {winding_at_top} above every segment")]
    OpenCurve { winding_at_top: i64 },
    #[error("adjacent cells near ({x}, {y}) disagree on the winding number")]
    InconsistentWinding { x: f64, y: f64 },
    #[error("infeasible mesh parameters: {reason}")]
    InfeasibleMesh { reason: String },
    #[error("invalid mesh: {reason}")]
    InvalidMesh { reason: String },
    #[error("smoothing schedule {schedule:?} must be positive and strictly decreasing")]
    BadSchedule { schedule: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauOptions {
    /// Target mesh edge length.
    pub h: f64,
    pub delta_schedule: Vec<f64>,
    /// Iteration cap per smoothing level.
    pub max_iters: usize,
    /// Vertex budget for the completed curve.
    pub n_vertices: usize,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        PlateauOptions { h: 0.05, delta_schedule: DEFAULT_DELTAS.to_vec(), max_iters: DEFAULT_MAX_ITERS, n_vertices: 1024 }
    }
}

/// Relative gap above which a certificate is flagged as inconclusive.
pub const GAP_FLAG: f64 = 0.05;

/// Interval `[lower, upper]` containing the Plateau value, with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauCertificate {
    /// Winding-number area of the boundary curve.
    pub lower: f64,
    /// Energy `∫|Jv|` of the discrete minimizer.
    pub upper: f64,
    /// `lower` minus the winding area of the sampled boundary polygon that
    /// the mesh actually sees. Zero when the mesh boundary contains every
    /// vertex of the curve.
    pub sampling_gap: f64,
    pub delta_schedule: Vec<f64>,
    pub h: f64,
    pub boundary_samples: usize,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
    /// `(upper − lower) / lower`, zero for a degenerate curve.
    pub relative_gap: f64,
    pub gap_flagged: bool,
}

impl PlateauCertificate {
    /// The zero certificate of a constant curve.
    fn degenerate(options: &PlateauOptions) -> Self {
        PlateauCertificate {
            lower: 0.0,
            upper: 0.0,
            sampling_gap: 0.0,
            delta_schedule: options.delta_schedule.clone(),
            h: options.h,
            boundary_samples: 0,
            iterations: 0,
            converged: true,
            grad_norm: 0.0,
            relative_gap: 0.0,
            gap_flagged: false,
        }
    }

    /// `lower ≤ upper` up to the boundary sampling error and `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.lower >= 0.0 && self.upper >= 0.0 && self.lower <= self.upper + self.sampling_gap.max(0.0) + tol
    }
}

/// Relaxed Plateau value of a BV curve: the Plateau value of its completed
/// curve.
pub fn plateau_value(curve: &Curve, options: &PlateauOptions) -> Result<PlateauCertificate, PlateauError> {
    if curve.total_variation().total == 0.0 {
        return Ok(PlateauCertificate::degenerate(options));
    }
    plateau_certificate(&completed_curve(curve, options.n_vertices), options)
}

/// Boundary angles for a mesh of size `h` spanning `poly`: uniform samples,
/// plus the parameters of the polyline's own vertices when there are few
/// enough of them to keep the spacing compatible with `h`.
pub fn boundary_angles_for(poly: &ClosedPolyline, h: f64) -> Vec<f64> {
    let n = ((TAU / h).round() as usize).max(8);
    let uniform: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let corners = corner_parameters(poly);
    if corners.is_empty() || corners.len() > n / 2 {
        return uniform;
    }
    merge_angles(&uniform, &corners, 0.25 * TAU / n as f64)
}

/// Constant-speed parameters of the polyline's vertices.
fn corner_parameters(poly: &ClosedPolyline) -> Vec<f64> {
    let total = poly.length();
    if total == 0.0 {
        return Vec::new();
    }
    let mut acc = 0.0;
    let mut out = Vec::new();
    for w in poly.vertices().windows(2) {
        out.push(normalize_angle(TAU * acc / total));
        acc += w[0].dist(w[1]);
    }
    out
}

/// Union of two angle sets in `[0, 2π)`; members of `base` within `min_sep`
/// of a member of `required` are dropped.
pub fn merge_angles(base: &[f64], required: &[f64], min_sep: f64) -> Vec<f64> {
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    };
    let mut out: Vec<f64> = required.iter().map(|&a| normalize_angle(a)).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| circ(*a, *b) <= 1e-12);
    let keep: Vec<f64> =
        base.iter().map(|&a| normalize_angle(a)).filter(|&a| out.iter().all(|&r| circ(a, r) > min_sep)).collect();
    out.extend(keep);
    out.sort_by(f64::total_cmp);
    out
}

/// Plateau certificate of a closed polyline.
pub fn plateau_certificate(poly: &ClosedPolyline, options: &PlateauOptions) -> Result<PlateauCertificate, PlateauError> {
    plateau_solve(poly, options).map(|(c, _)| c)
}

/// [`plateau_certificate`] together with the discrete minimizer, which is
/// `None` for a degenerate curve.
pub fn plateau_solve(
    poly: &ClosedPolyline,
    options: &PlateauOptions,
) -> Result<(PlateauCertificate, Option<Minimized>), PlateauError> {
    if poly.is_degenerate() {
        return Ok((PlateauCertificate::degenerate(options), None));
    }
    let lower = winding_area(poly)?;
    let angles = boundary_angles_for(poly, options.h);
    let mesh = make_disk_mesh_with_angles(options.h, &angles)?;
    let sampled = ClosedPolyline::new(mesh.boundary_loop.iter().map(|&i| poly.point_at(mesh.vertices[i].angle())).collect());
    let sampling_gap = lower - winding_area(&sampled)?;
    let run = jacobian_tv_minimize(poly, &mesh, &options.delta_schedule, options.max_iters)?;
    let relative_gap = if lower > 0.0 { (run.upper - lower) / lower } else { 0.0 };
    let certificate = PlateauCertificate {
        lower,
        upper: run.upper,
        sampling_gap,
        delta_schedule: options.delta_schedule.clone(),
        h: options.h,
        boundary_samples: mesh.boundary_loop.len(),
        iterations: run.iterations.iter().sum(),
        converged: run.converged,
        grad_norm: run.grad_norm,
        relative_gap,
        gap_flagged: relative_gap.abs() > GAP_FLAG,
    };
    Ok((certificate, Some(run)))
}
