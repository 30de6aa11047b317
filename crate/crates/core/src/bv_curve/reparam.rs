use serde::Serialize;

use super::{Curve, Side};
use crate::geom::TAU;

/// Gap `[s_minus, s_plus]` that the reparametrization leaves at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpInterval {
    pub theta: f64,
    pub s_minus: f64,
    pub s_plus: f64,
}

impl JumpInterval {
    pub fn width(&self) -> f64 {
        self.s_plus - self.s_minus
    }
}

/// The limit arclength-type profile
/// `s(t) = L/(L+2π) · (t + |γ̇|([0, t]))` on `[0, 2π]`.
///
/// `s` is strictly increasing, continuous off the jump set and jumps by
/// `L/(L+2π)·|γ⁺−γ⁻|` at each jump. A jump sitting at `t = 0` is counted at the
/// start, so `s(0⁻) = 0` and `s(2π) = L`.
#[derive(Debug, Clone)]
pub struct ReparamProfile {
    curve: Curve,
    length: f64,
    scale: f64,
    jumps: Vec<JumpInterval>,
}

impl ReparamProfile {
    pub fn length(&self) -> f64 {
        self.length
    }

    /// `L / (L + 2π)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Jump intervals sorted by angle.
    pub fn jump_intervals(&self) -> &[JumpInterval] {
        &self.jumps
    }

    /// One-sided value `s(t^±)` for `t ∈ [0, 2π]`.
    pub fn eval(&self, t: f64, side: Side) -> f64 {
        let t = t.clamp(0.0, TAU);
        if t == 0.0 && side == Side::Left {
            return 0.0;
        }
        if t == TAU {
            return self.length;
        }
        self.scale * (t + variation_up_to(&self.curve, t, side))
    }
}

/// `|γ̇|([0, t))` for the left side and `|γ̇|([0, t])` for the right side.
fn variation_up_to(curve: &Curve, t: f64, side: Side) -> f64 {
    let mut acc = 0.0;
    for a in curve.arcs() {
        let end = a.theta0 + a.span;
        if end <= TAU {
            acc += a.mass_to((t - a.theta0).clamp(0.0, a.span), &a.cantor);
        } else {
            // wraps through 0: [theta0, 2π) then [0, end - 2π)
            let head = TAU - a.theta0;
            if t > a.theta0 {
                acc += a.mass_to(t - a.theta0, &a.cantor);
            }
            let upto = (t).min(end - TAU);
            acc += a.mass_to(head + upto, &a.cantor) - a.mass_to(head, &a.cantor);
        }
    }
    for j in curve.jumps() {
        let counted = match side {
            Side::Left => j.theta < t,
            Side::Right => j.theta <= t,
        };
        if counted {
            acc += j.size();
        }
    }
    acc
}

/// Builds `s(t)`. Returns `None` when the curve has no variation.
pub fn reparam_profile(curve: &Curve) -> Option<ReparamProfile> {
    let length = curve.total_variation().total;
    if length == 0.0 {
        return None;
    }
    let scale = length / (length + TAU);
    let mut jumps: Vec<JumpInterval> = curve
        .jumps()
        .iter()
        .map(|j| {
            let s_minus = if j.theta == 0.0 { 0.0 } else { scale * (j.theta + variation_up_to(curve, j.theta, Side::Left)) };
            JumpInterval { theta: j.theta, s_minus, s_plus: s_minus + scale * j.size() }
        })
        .collect();
    jumps.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Some(ReparamProfile { curve: curve.clone(), length, scale, jumps })
}
