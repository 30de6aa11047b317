//! Face decomposition of the plane cut by a closed polyline.
//!
//! The plane inside the bounding box is split into vertical slabs at every
//! vertex and every crossing abscissa. Inside a slab no two segments cross,
//! so the slab is a stack of trapezoidal cells with a constant winding
//! number, found by counting signed crossings upward from the outer cell.
//! Cells that touch across a slab boundary (and are not separated by a
//! vertical segment) are merged into faces of the arrangement.

use serde::Serialize;

use super::winding::{scale_of, SNAP_REL};
use super::PlateauError;
use crate::bv_curve::ClosedPolyline;
use crate::geom::{orient, pairwise_sum, Vec2};

/// Directed segment stored with `p` left of `q` (lexicographically).
#[derive(Debug, Clone, Copy)]
struct Seg {
    p: Vec2,
    q: Vec2,
    /// +1 when the curve runs from `p` to `q`.
    dir: i64,
}

impl Seg {
    fn canonical(a: Vec2, b: Vec2) -> Seg {
        if (a.x, a.y) <= (b.x, b.y) {
            Seg { p: a, q: b, dir: 1 }
        } else {
            Seg { p: b, q: a, dir: -1 }
        }
    }

    fn y_at(&self, x: f64) -> f64 {
        let t = (x - self.p.x) / (self.q.x - self.p.x);
        self.p.y + t.clamp(0.0, 1.0) * (self.q.y - self.p.y)
    }
}

/// Trapezoid `x0 ≤ x ≤ x1`, between the lines through `lower` and `upper`.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    /// `y` of the lower edge at `x0` and `x1`.
    pub lower: [f64; 2],
    /// `y` of the upper edge at `x0` and `x1`.
    pub upper: [f64; 2],
    pub winding: i64,
    pub area: f64,
    pub face: usize,
}

impl Cell {
    pub fn polygon(&self) -> [Vec2; 4] {
        [
            Vec2::new(self.x0, self.lower[0]),
            Vec2::new(self.x1, self.lower[1]),
            Vec2::new(self.x1, self.upper[1]),
            Vec2::new(self.x0, self.upper[0]),
        ]
    }
}

/// A connected component of the complement of the curve, clipped to the
/// bounding box and stored as the list of its trapezoidal cells.
#[derive(Debug, Clone, Serialize)]
pub struct Face {
    pub winding: i64,
    pub area: f64,
    pub unbounded: bool,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Arrangement {
    pub bbox: (Vec2, Vec2),
    cells: Vec<Cell>,
    faces: Vec<Face>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

impl Arrangement {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn bbox_area(&self) -> f64 {
        let (lo, hi) = self.bbox;
        (hi.x - lo.x) * (hi.y - lo.y)
    }

    /// `Σ |w(f)| · area(f)`.
    pub fn winding_area(&self) -> f64 {
        let terms: Vec<f64> = self.cells.iter().map(|c| c.winding.unsigned_abs() as f64 * c.area).collect();
        pairwise_sum(&terms)
    }

    /// Signed `Σ w(f) · area(f)`; equals the shoelace area.
    pub fn signed_area(&self) -> f64 {
        let terms: Vec<f64> = self.cells.iter().map(|c| c.winding as f64 * c.area).collect();
        pairwise_sum(&terms)
    }

    pub fn build(poly: &ClosedPolyline) -> Result<Arrangement, PlateauError> {
        Self::build_with(poly, SNAP_REL)
    }

    pub fn build_with(poly: &ClosedPolyline, snap_rel: f64) -> Result<Arrangement, PlateauError> {
        let bbox = poly.bbox();
        let mut segs: Vec<Seg> = poly.segments().map(|(a, b)| Seg::canonical(a, b)).collect();
        if segs.is_empty() {
            return Ok(Arrangement { bbox, cells: Vec::new(), faces: Vec::new() });
        }
        segs.sort_by(|s, t| {
            (s.p.x, s.p.y, s.q.x, s.q.y, s.dir)
                .partial_cmp(&(t.p.x, t.p.y, t.q.x, t.q.y, t.dir))
                .unwrap()
        });
        let eps = snap_rel * scale_of(poly);

        // slab boundaries: vertex abscissae plus proper crossings
        let mut xs: Vec<f64> = segs.iter().flat_map(|s| [s.p.x, s.q.x]).collect();
        for i in 0..segs.len() {
            let si = segs[i];
            for sj in &segs[i + 1..] {
                if sj.p.x > si.q.x {
                    break;
                }
                if let Some(x) = proper_crossing_x(si, *sj) {
                    xs.push(x);
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        let mut bounds: Vec<f64> = Vec::with_capacity(xs.len());
        for x in xs {
            match bounds.last() {
                Some(&last) if x - last <= eps => {}
                _ => bounds.push(x),
            }
        }
        let slot = |x: f64| -> usize {
            let i = bounds.partition_point(|&b| b < x);
            if i == 0 {
                0
            } else if i == bounds.len() {
                bounds.len() - 1
            } else if x - bounds[i - 1] <= bounds[i] - x {
                i - 1
            } else {
                i
            }
        };

        let nb = bounds.len();
        // vertical blockers at each boundary: y-intervals
        let mut vertical: Vec<Vec<(f64, f64)>> = vec![Vec::new(); nb];
        let mut spans: Vec<(usize, usize, usize)> = Vec::new(); // (first slab, end slab, seg)
        for (idx, s) in segs.iter().enumerate() {
            let (a, b) = (slot(s.p.x), slot(s.q.x));
            if a == b {
                let (lo, hi) = if s.p.y <= s.q.y { (s.p.y, s.q.y) } else { (s.q.y, s.p.y) };
                vertical[a].push((lo, hi));
            } else {
                spans.push((a, b, idx));
            }
        }
        for v in &mut vertical {
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        spans.sort_by_key(|&(a, _, idx)| (a, idx));

        let (ymin, ymax) = (bbox.0.y, bbox.1.y);
        let mut cells: Vec<Cell> = Vec::new();
        // cell index ranges per slab
        let mut slab_cells: Vec<std::ops::Range<usize>> = Vec::with_capacity(nb.saturating_sub(1));
        let mut outer: Vec<usize> = Vec::new();
        let mut active: Vec<usize> = Vec::new(); // indices into `spans`
        let mut next = 0;
        for k in 0..nb.saturating_sub(1) {
            active.retain(|&i| spans[i].1 > k);
            while next < spans.len() && spans[next].0 == k {
                active.push(next);
                next += 1;
            }
            let (x0, x1) = (bounds[k], bounds[k + 1]);
            let mut stack: Vec<(f64, f64, usize)> = active
                .iter()
                .map(|&i| {
                    let (a, b, idx) = spans[i];
                    let s = &segs[idx];
                    let yl = if a == k { s.p.y } else { s.y_at(x0) };
                    let yr = if b == k + 1 { s.q.y } else { s.y_at(x1) };
                    (yl, yr, idx)
                })
                .collect();
            stack.sort_by(|a, b| {
                (a.0 + a.1)
                    .total_cmp(&(b.0 + b.1))
                    .then(a.0.total_cmp(&b.0))
                    .then(a.2.cmp(&b.2))
            });
            let tol = 64.0 * eps;
            for w in stack.windows(2) {
                if w[1].0 < w[0].0 - tol || w[1].1 < w[0].1 - tol {
                    let (a, b) = (w[0].2, w[1].2);
                    return Err(PlateauError::ArrangementFailure {
                        first: [[segs[a].p.x, segs[a].p.y], [segs[a].q.x, segs[a].q.y]],
                        second: [[segs[b].p.x, segs[b].p.y], [segs[b].q.x, segs[b].q.y]],
                    });
                }
            }
            let start = cells.len();
            let dx = x1 - x0;
            let mut winding = 0i64;
            let mut below = (ymin, ymin);
            for &(yl, yr, idx) in &stack {
                cells.push(Cell {
                    x0,
                    x1,
                    lower: [below.0, below.1],
                    upper: [yl, yr],
                    winding,
                    area: dx * ((yl + yr) - (below.0 + below.1)) / 2.0,
                    face: 0,
                });
                winding += segs[idx].dir;
                below = (yl, yr);
            }
            if winding != 0 {
                return Err(PlateauError::OpenCurve { winding_at_top: winding });
            }
            cells.push(Cell {
                x0,
                x1,
                lower: [below.0, below.1],
                upper: [ymax, ymax],
                winding,
                area: dx * ((ymax + ymax) - (below.0 + below.1)) / 2.0,
                face: 0,
            });
            outer.push(start);
            outer.push(cells.len() - 1);
            slab_cells.push(start..cells.len());
        }

        // merge across interior slab boundaries
        let mut uf = UnionFind((0..cells.len()).collect());
        for k in 1..slab_cells.len() {
            let left = slab_cells[k - 1].clone();
            let right = slab_cells[k].clone();
            let tol = 16.0 * eps;
            let (mut i, mut j) = (left.start, right.start);
            while i < left.end && j < right.end {
                let (a, b) = (&cells[i], &cells[j]);
                let lo = a.lower[1].max(b.lower[0]);
                let hi = a.upper[1].min(b.upper[0]);
                if hi - lo > tol && uncovered(lo, hi, &vertical[k]) > tol {
                    if a.winding != b.winding {
                        return Err(PlateauError::InconsistentWinding { x: bounds[k], y: 0.5 * (lo + hi) });
                    }
                    uf.union(i, j);
                }
                if a.upper[1] <= b.upper[0] {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
        for &o in &outer {
            uf.union(o, outer[0]);
        }

        let mut face_of_root: Vec<Option<usize>> = vec![None; cells.len()];
        let mut faces: Vec<Face> = Vec::new();
        for (c, cell) in cells.iter_mut().enumerate() {
            let r = uf.find(c);
            let f = *face_of_root[r].get_or_insert_with(|| {
                faces.push(Face { winding: cell.winding, area: 0.0, unbounded: false, cells: Vec::new() });
                faces.len() - 1
            });
            cell.face = f;
            faces[f].cells.push(c);
        }
        if let Some(&o) = outer.first() {
            faces[cells[o].face].unbounded = true;
        }
        for f in &mut faces {
            let areas: Vec<f64> = f.cells.iter().map(|&c| cells[c].area).collect();
            f.area = pairwise_sum(&areas);
        }
        Ok(Arrangement { bbox, cells, faces })
    }
}

/// Length of `[lo, hi]` not covered by the sorted intervals `blocks`.
fn uncovered(lo: f64, hi: f64, blocks: &[(f64, f64)]) -> f64 {
    let mut free = 0.0;
    let mut cursor = lo;
    for &(a, b) in blocks {
        if b <= cursor {
            continue;
        }
        if a >= hi {
            break;
        }
        if a > cursor {
            free += a - cursor;
        }
        cursor = cursor.max(b);
        if cursor >= hi {
            return free;
        }
    }
    free + (hi - cursor).max(0.0)
}

/// Abscissa where two segments cross at interior points of both.
fn proper_crossing_x(s: Seg, t: Seg) -> Option<f64> {
    let o1 = orient(s.p, s.q, t.p);
    let o2 = orient(s.p, s.q, t.q);
    let o3 = orient(t.p, t.q, s.p);
    let o4 = orient(t.p, t.q, s.q);
    if o1 * o2 >= 0.0 || o3 * o4 >= 0.0 {
        return None;
    }
    let (ds, dt) = (s.q - s.p, t.q - t.p);
    let u = (t.p - s.p).cross(dt) / ds.cross(dt);
    let x = s.p.x + u * ds.x;
    let lo = s.p.x.max(t.p.x);
    let hi = s.q.x.min(t.q.x);
    Some(x.clamp(lo, hi))
}

/// Exact `∫ |deg(poly, y)| dy` via the arrangement.
pub fn winding_area(poly: &ClosedPolyline) -> Result<f64, PlateauError> {
    Ok(Arrangement::build(poly)?.winding_area())
}
