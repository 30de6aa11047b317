//! Static SVG figures.

use std::fmt::Write;

use bv_plateau::bv_curve::ClosedPolyline;
use bv_plateau::plateau::{Arrangement, DiscreteMap};
use bv_plateau::Vec2;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;

struct Frame {
    lo: Vec2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn around(points: impl Iterator<Item = Vec2>) -> Frame {
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.is_finite() {
            lo = Vec2::ZERO;
            hi = Vec2::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Frame { lo, scale, height: (hi.y - lo.y) * scale + 2.0 * MARGIN }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale, self.height - MARGIN - (p.y - self.lo.y) * self.scale)
    }

    fn points(&self, pts: &[Vec2]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn open(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{h:.3}\" viewBox=\"0 0 {SIZE} {h:.3}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            h = self.height
        )
    }
}

/// The curve over its arrangement; cell opacity grows with `|winding|`.
pub fn curve_figure(poly: &ClosedPolyline, arrangement: Option<&Arrangement>) -> String {
    let frame = Frame::around(poly.vertices().iter().copied());
    let mut s = frame.open();
    if let Some(a) = arrangement {
        let max_w = a.cells().iter().map(|c| c.winding.abs()).max().unwrap_or(0).max(1) as f64;
        for cell in a.cells().iter().filter(|c| c.winding != 0) {
            let opacity = 0.15 + 0.6 * cell.winding.abs() as f64 / max_w;
            let _ = writeln!(
                s,
                "<polygon points=\"{}\" fill=\"steelblue\" fill-opacity=\"{opacity:.3}\" stroke=\"none\"/>",
                frame.points(&cell.polygon())
            );
        }
    }
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>", frame.points(poly.vertices()));
    s.push_str("</svg>\n");
    s
}

/// Mesh triangles in the domain, shaded by `|value|`.
pub fn mesh_figure(map: &DiscreteMap) -> String {
    let mesh = &map.mesh;
    let frame = Frame::around(mesh.vertices.iter().copied());
    let mut s = frame.open();
    let max_v = map.values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    for &[a, b, c] in &mesh.triangles {
        let mean = (map.values[a].norm() + map.values[b].norm() + map.values[c].norm()) / 3.0;
        let opacity = 0.1 + 0.8 * mean / max_v;
        let tri = [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]];
        let _ = writeln!(
            s,
            "<polygon points=\"{}\" fill=\"darkorange\" fill-opacity=\"{opacity:.3}\" stroke=\"gray\" stroke-width=\"0.2\"/>",
            frame.points(&tri)
        );
    }
    s.push_str("</svg>\n");
    s
}
