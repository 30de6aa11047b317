use serde::{Serialize, Serializer};

use super::{Curve, Piece, Side};
use crate::geom::{pairwise_sum, Vec2, TAU};

/// Closed Lipschitz curve given by its vertices, parametrized at constant
/// speed over `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolyline {
    /// First vertex repeated at the end.
    vertices: Vec<Vec2>,
    cumlen: Vec<f64>,
}

impl Serialize for ClosedPolyline {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl ClosedPolyline {
    /// Closes the vertex list if needed. Panics on an empty list.
    pub fn new(mut vertices: Vec<Vec2>) -> Self {
        assert!(!vertices.is_empty(), "polyline needs at least one vertex");
        if vertices.first() != vertices.last() || vertices.len() == 1 {
            vertices.push(vertices[0]);
        }
        let mut cumlen = Vec::with_capacity(vertices.len());
        let mut acc = 0.0;
        cumlen.push(0.0);
        for w in vertices.windows(2) {
            acc += w[0].dist(w[1]);
            cumlen.push(acc);
        }
        ClosedPolyline { vertices, cumlen }
    }

    pub fn point(p: Vec2) -> Self {
        ClosedPolyline::new(vec![p, p])
    }

    /// Regular `n`-gon inscribed in the circle of radius `r`, counterclockwise.
    pub fn regular(n: usize, r: f64) -> Self {
        ClosedPolyline::new((0..n).map(|i| Vec2::from_angle(TAU * i as f64 / n as f64) * r).collect())
    }

    /// Vertices with the closing duplicate.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Vertices without the closing duplicate.
    pub fn open_vertices(&self) -> &[Vec2] {
        &self.vertices[..self.vertices.len() - 1]
    }

    pub fn length(&self) -> f64 {
        *self.cumlen.last().unwrap()
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() == 0.0
    }

    /// Non-degenerate directed segments in traversal order.
    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        self.vertices.windows(2).filter(|w| w[0] != w[1]).map(|w| (w[0], w[1]))
    }

    /// Constant-speed point at parameter `theta ∈ [0, 2π)`.
    pub fn point_at(&self, theta: f64) -> Vec2 {
        let total = self.length();
        if total == 0.0 {
            return self.vertices[0];
        }
        let s = (theta.rem_euclid(TAU) / TAU) * total;
        let i = self.cumlen.partition_point(|&c| c <= s).clamp(1, self.vertices.len() - 1);
        let seg = self.cumlen[i] - self.cumlen[i - 1];
        let t = if seg > 0.0 { (s - self.cumlen[i - 1]) / seg } else { 0.0 };
        self.vertices[i - 1].lerp(self.vertices[i], t.clamp(0.0, 1.0))
    }

    /// Arclength-weighted centroid (vertex mean for a degenerate curve).
    pub fn centroid(&self) -> Vec2 {
        let total = self.length();
        if total == 0.0 {
            let n = self.open_vertices().len() as f64;
            let s = self.open_vertices().iter().fold(Vec2::ZERO, |acc, &p| acc + p);
            return s * (1.0 / n);
        }
        let xs: Vec<f64> = self.vertices.windows(2).map(|w| (w[0].x + w[1].x) * 0.5 * w[0].dist(w[1])).collect();
        let ys: Vec<f64> = self.vertices.windows(2).map(|w| (w[0].y + w[1].y) * 0.5 * w[0].dist(w[1])).collect();
        Vec2::new(pairwise_sum(&xs) / total, pairwise_sum(&ys) / total)
    }

    /// Bounding box `(min, max)`.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> ClosedPolyline {
        ClosedPolyline::new(self.open_vertices().iter().map(|&p| f(p)).collect())
    }

    pub fn reversed(&self) -> ClosedPolyline {
        let mut v: Vec<Vec2> = self.open_vertices().to_vec();
        v.reverse();
        ClosedPolyline::new(v)
    }

    /// Cyclic shift of the starting vertex.
    pub fn rotated(&self, by: usize) -> ClosedPolyline {
        let mut v: Vec<Vec2> = self.open_vertices().to_vec();
        let n = v.len();
        v.rotate_left(by % n);
        ClosedPolyline::new(v)
    }

    /// Parses `x,y` lines; blank lines, `#` comments and a leading `x,y`
    /// header are skipped.
    pub fn from_csv(text: &str) -> Result<ClosedPolyline, String> {
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if pts.is_empty() && line.replace(' ', "").eq_ignore_ascii_case("x,y") {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64, String> {
                let s = s.ok_or_else(|| format!("line {}: expected `x,y`", lineno + 1))?;
                s.parse::<f64>().map_err(|e| format!("line {}: {e}", lineno + 1))
            };
            let x = parse(it.next())?;
            let y = parse(it.next())?;
            if it.next().is_some() {
                return Err(format!("line {}: expected exactly two columns", lineno + 1));
            }
            if !x.is_finite() || !y.is_finite() {
                return Err(format!("line {}: non-finite coordinate", lineno + 1));
            }
            pts.push(Vec2::new(x, y));
        }
        if pts.is_empty() {
            return Err("polyline has no vertices".into());
        }
        Ok(ClosedPolyline::new(pts))
    }
}

/// The completed curve `γ̃`: the image of `γ` with every jump bridged by the
/// straight segment `[γ⁻, γ⁺]`.
///
/// Curved arcs get `max(1, ⌊n·mass/L⌋)` chords; polyline paths keep their
/// corners, so polygonal data is reproduced exactly.
pub fn completed_curve(curve: &Curve, n_vertices: usize) -> ClosedPolyline {
    let total = curve.total_variation().total;
    if total == 0.0 {
        return ClosedPolyline::point(curve.evaluate(0.0, Side::Right));
    }
    let pieces = curve.pieces();
    let first_arc = pieces.iter().position(|p| matches!(p, Piece::Arc(_))).unwrap();
    let mut out: Vec<Vec2> = Vec::with_capacity(n_vertices + 8);
    let push = |p: Vec2, out: &mut Vec<Vec2>| {
        if let Some(&last) = out.last() {
            if last.dist(p) <= 1e-13 * 1f64.max(p.norm()) {
                return;
            }
        }
        out.push(p);
    };
    for step in 0..pieces.len() {
        match &pieces[(first_arc + step) % pieces.len()] {
            Piece::Arc(a) => {
                let mass = a.mass();
                if mass == 0.0 {
                    push(a.start_point(), &mut out);
                    continue;
                }
                let segments = ((n_vertices as f64) * mass / total).floor().max(1.0) as usize;
                for p in a.path.trace(segments) {
                    push(p, &mut out);
                }
            }
            Piece::Jump(j) => push(j.right, &mut out),
        }
    }
    // snap the closing vertex onto the first one
    if out.len() > 1 && out.last().unwrap().dist(out[0]) <= 1e-9 * 1f64.max(out[0].norm()) {
        out.pop();
    }
    ClosedPolyline::new(out)
}
