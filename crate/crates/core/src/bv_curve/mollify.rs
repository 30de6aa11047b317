use serde::Serialize;

use super::{angle_diff, ClosedPolyline, CumulativeVariation, Curve, Side};
use crate::geom::{normalize_angle, pairwise_sum, Vec2, TAU};

/// Linear transition replacing a jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub center: f64,
    pub half_width: f64,
    pub from: Vec2,
    pub to: Vec2,
}

impl Window {
    fn offset(&self, theta: f64) -> Option<f64> {
        let d = angle_diff(self.center, theta);
        (d.abs() <= self.half_width).then_some(d)
    }
}

/// Lipschitz approximant `φ_k` of a BV curve.
///
/// Every jump is replaced by a linear transition on an angle window of width
/// `w_k`, and every Cantor profile by its piecewise-linear interpolant on `2^k`
/// cells. Outside the windows the geometric trace of each arc is unchanged, so
/// `TV(φ_k) ≤ TV(γ)`.
#[derive(Debug, Clone)]
pub struct MollifiedCurve {
    base: Curve,
    k: usize,
    window_width: f64,
    windows: Vec<Window>,
    cantor: Vec<CumulativeVariation>,
}

/// Builds `φ_k`, `k ≥ 1`.
pub fn mollify_sequence(curve: &Curve, k: usize) -> MollifiedCurve {
    assert!(k >= 1, "mollifier index starts at 1");
    let cells = 1usize.checked_shl(k as u32).unwrap_or(usize::MAX);
    let cantor: Vec<CumulativeVariation> = curve.arcs().iter().map(|a| a.cantor.interpolant(cells)).collect();
    let jumps = curve.jumps();
    let window_width = if jumps.is_empty() {
        0.0
    } else {
        let mut angles: Vec<f64> = jumps.iter().map(|j| j.theta).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = (0..angles.len())
            .map(|i| {
                let next = angles[(i + 1) % angles.len()];
                let gap = (next - angles[i]).rem_euclid(TAU);
                if gap == 0.0 {
                    TAU
                } else {
                    gap
                }
            })
            .fold(TAU, f64::min);
        (TAU / (8.0 * jumps.len() as f64)).min(1.0 / k as f64).min(min_gap / 2.0)
    };
    let mut out = MollifiedCurve { base: curve.clone(), k, window_width, windows: Vec::new(), cantor };
    let half = window_width / 2.0;
    out.windows = jumps
        .iter()
        .map(|j| Window {
            center: j.theta,
            half_width: half,
            from: out.base_point(j.theta - half),
            to: out.base_point(j.theta + half),
        })
        .collect();
    out
}

impl MollifiedCurve {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn window_width(&self) -> f64 {
        self.window_width
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn base(&self) -> &Curve {
        &self.base
    }

    fn base_point(&self, theta: f64) -> Vec2 {
        let (i, local) = self.base.locate(theta, Side::Right);
        self.base.arcs()[i].point_at_with(local, &self.cantor[i])
    }

    pub fn evaluate(&self, theta: f64) -> Vec2 {
        for w in &self.windows {
            if let Some(d) = w.offset(theta) {
                return w.from.lerp(w.to, (d + w.half_width) / (2.0 * w.half_width));
            }
        }
        self.base_point(theta)
    }

    /// Exact total variation of `φ_k`.
    pub fn total_variation(&self) -> f64 {
        let mut parts = Vec::new();
        for (i, arc) in self.base.arcs().iter().enumerate() {
            let mut covered: Vec<(f64, f64)> = Vec::new();
            for w in &self.windows {
                let o = (w.center - arc.theta0).rem_euclid(TAU);
                for c in [o, o - TAU] {
                    let lo = (c - w.half_width).max(0.0);
                    let hi = (c + w.half_width).min(arc.span);
                    if hi > lo {
                        covered.push((lo, hi));
                    }
                }
            }
            covered.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cursor = 0.0;
            for (lo, hi) in covered {
                if lo > cursor {
                    parts.push(arc.mass_to(lo, &self.cantor[i]) - arc.mass_to(cursor, &self.cantor[i]));
                }
                cursor = f64::max(cursor, hi);
            }
            if arc.span > cursor {
                parts.push(arc.mass_to(arc.span, &self.cantor[i]) - arc.mass_to(cursor, &self.cantor[i]));
            }
        }
        parts.extend(self.windows.iter().map(|w| w.from.dist(w.to)));
        pairwise_sum(&parts)
    }

    /// `∫ |φ_k − γ| dθ` by the midpoint rule on `nodes` angles.
    pub fn l1_distance(&self, nodes: usize) -> f64 {
        let n = nodes.max(1);
        let d = TAU / n as f64;
        let terms: Vec<f64> = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) * d;
                self.evaluate(t).dist(self.base.evaluate(t, Side::Right)) * d
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// Angles where `φ_k` may have a kink: window edges and arc starts.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .windows
            .iter()
            .flat_map(|w| [normalize_angle(w.center - w.half_width), normalize_angle(w.center + w.half_width)])
            .collect();
        for a in self.base.arcs() {
            if self.windows.iter().all(|w| w.offset(a.theta0).is_none()) {
                b.push(a.theta0);
            }
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `(θ, φ_k(θ))` on `n` uniform angles merged with the breakpoints.
    pub fn dense_samples(&self, n: usize) -> Vec<(f64, Vec2)> {
        let mut thetas: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        thetas.extend(self.breakpoints());
        thetas.sort_by(f64::total_cmp);
        thetas.dedup();
        thetas.into_iter().map(|t| (t, self.evaluate(t))).collect()
    }

    pub fn dense_polyline(&self, n: usize) -> ClosedPolyline {
        ClosedPolyline::new(self.dense_samples(n).into_iter().map(|(_, p)| p).collect())
    }
}
