//! Winding number of a closed polyline around a point.

use std::f64::consts::PI;

use super::PlateauError;
use crate::bv_curve::ClosedPolyline;
use crate::geom::{orient, point_segment_distance, Vec2};

/// Default snap epsilon, relative to the polyline's bounding-box size.
pub const SNAP_REL: f64 = 1e-12;

pub(crate) fn scale_of(poly: &ClosedPolyline) -> f64 {
    let (lo, hi) = poly.bbox();
    (hi.x - lo.x).max(hi.y - lo.y).max(lo.norm()).max(hi.norm()).max(f64::MIN_POSITIVE)
}

fn check_off_curve(poly: &ClosedPolyline, point: Vec2) -> Result<(), PlateauError> {
    let eps = SNAP_REL * scale_of(poly);
    let distance = poly
        .vertices()
        .windows(2)
        .map(|w| point_segment_distance(point, w[0], w[1]))
        .fold(f64::INFINITY, f64::min);
    if distance <= eps {
        return Err(PlateauError::PointOnCurve { point: [point.x, point.y], distance });
    }
    Ok(())
}

/// Crossing-number winding (Sunday's rule) with exact orientation signs.
/// Points within the snap epsilon of the curve are rejected.
pub fn winding_number(poly: &ClosedPolyline, point: Vec2) -> Result<i64, PlateauError> {
    check_off_curve(poly, point)?;
    Ok(crossing_winding(poly, point))
}

pub(crate) fn crossing_winding(poly: &ClosedPolyline, point: Vec2) -> i64 {
    let mut w = 0i64;
    for (a, b) in poly.segments() {
        if a.y <= point.y {
            if b.y > point.y && orient(a, b, point) > 0.0 {
                w += 1;
            }
        } else if b.y <= point.y && orient(a, b, point) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Winding number from the total signed angle swept around `point`.
pub fn winding_number_angle_sum(poly: &ClosedPolyline, point: Vec2) -> Result<i64, PlateauError> {
    check_off_curve(poly, point)?;
    let total: f64 = poly
        .segments()
        .map(|(a, b)| {
            let (u, v) = (a - point, b - point);
            u.cross(v).atan2(u.dot(v))
        })
        .sum();
    Ok((total / (2.0 * PI)).round() as i64)
}
