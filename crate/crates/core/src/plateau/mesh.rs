//! Triangulations of a disk centred at the origin.

use std::collections::HashMap;

use serde::Serialize;

use super::PlateauError;
use crate::geom::{normalize_angle, orient, pairwise_sum, Vec2, TAU};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriMesh {
    pub vertices: Vec<Vec2>,
    /// Counterclockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary vertices in counterclockwise order.
    pub boundary_loop: Vec<usize>,
    pub radius: f64,
}

impl TriMesh {
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * (self.vertices[b] - self.vertices[a]).cross(self.vertices[c] - self.vertices[a])
    }

    pub fn total_area(&self) -> f64 {
        let areas: Vec<f64> = (0..self.triangles.len()).map(|t| self.signed_area(t)).collect();
        pairwise_sum(&areas)
    }

    /// Polar angles of the boundary vertices.
    pub fn boundary_angles(&self) -> Vec<f64> {
        self.boundary_loop.iter().map(|&i| self.vertices[i].angle()).collect()
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.vertices.len()];
        for &i in &self.boundary_loop {
            m[i] = true;
        }
        m
    }

    /// Same connectivity on the disk of radius `radius`.
    pub fn scaled(&self, radius: f64) -> TriMesh {
        let s = radius / self.radius;
        TriMesh {
            vertices: self.vertices.iter().map(|&v| v * s).collect(),
            triangles: self.triangles.clone(),
            boundary_loop: self.boundary_loop.clone(),
            radius,
        }
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|&[a, b, c]| {
                let (p, q, r) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                [corner_angle(p, q, r), corner_angle(q, r, p), corner_angle(r, p, q)]
            })
            .fold(180.0, f64::min)
    }

    /// Longest edge length.
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(i, j)| self.vertices[i].dist(self.vertices[j]))
            .fold(0.0, f64::max)
    }

    /// Checks the structural invariants of a disk triangulation.
    pub fn validate(&self) -> Result<(), PlateauError> {
        let bad = |reason: String| Err(PlateauError::InvalidMesh { reason });
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= self.vertices.len()) {
                return bad(format!("triangle {t} references a missing vertex"));
            }
            let [a, b, c] = *tri;
            if orient(self.vertices[a], self.vertices[b], self.vertices[c]) <= 0.0 {
                return bad(format!("triangle {t} is not positively oriented"));
            }
        }
        for &i in &self.boundary_loop {
            let r = self.vertices[i].norm();
            if (r - self.radius).abs() > 1e-12 * self.radius {
                return bad(format!("boundary vertex {i} at radius {r}"));
            }
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for &[a, b, c] in &self.triangles {
            for (i, j) in [(a, b), (b, c), (c, a)] {
                if edges.insert((i, j), 1).is_some() {
                    return bad(format!("directed edge ({i},{j}) used twice"));
                }
            }
        }
        let mut boundary_edges = 0;
        for &(i, j) in edges.keys() {
            if !edges.contains_key(&(j, i)) {
                boundary_edges += 1;
            }
        }
        let n = self.boundary_loop.len();
        if boundary_edges != n {
            return bad(format!("{boundary_edges} boundary edges but {n} boundary vertices"));
        }
        for k in 0..n {
            let (i, j) = (self.boundary_loop[k], self.boundary_loop[(k + 1) % n]);
            if !edges.contains_key(&(i, j)) || edges.contains_key(&(j, i)) {
                return bad(format!("boundary loop edge ({i},{j}) is not a boundary edge"));
            }
        }
        let undirected = (edges.len() + boundary_edges) / 2;
        let euler = self.vertices.len() as i64 - undirected as i64 + self.triangles.len() as i64;
        if euler != 1 {
            return bad(format!("Euler characteristic {euler}, expected 1"));
        }
        Ok(())
    }
}

fn corner_angle(at: Vec2, p: Vec2, q: Vec2) -> f64 {
    let (u, v) = (p - at, q - at);
    u.cross(v).abs().atan2(u.dot(v)).to_degrees()
}

/// Disk mesh with `boundary_samples` equally spaced boundary vertices.
pub fn make_disk_mesh(h: f64, boundary_samples: usize) -> Result<TriMesh, PlateauError> {
    let angles: Vec<f64> = (0..boundary_samples).map(|i| TAU * i as f64 / boundary_samples as f64).collect();
    make_disk_mesh_with_angles(h, &angles)
}

/// Unit-disk mesh with target edge length `h` and boundary vertices at the
/// given polar angles.
///
/// Vertices are laid out on concentric rings, consecutive rings are stitched
/// together, and the result is improved by Delaunay edge flips and a few
/// rounds of Laplacian smoothing.
pub fn make_disk_mesh_with_angles(h: f64, boundary_angles: &[f64]) -> Result<TriMesh, PlateauError> {
    let infeasible = |reason: String| Err(PlateauError::InfeasibleMesh { reason });
    if !(h > 0.0 && h < 1.0) {
        return infeasible(format!("edge length h = {h} must lie in (0, 1)"));
    }
    let nb = boundary_angles.len();
    if nb < 8 {
        return infeasible(format!("{nb} boundary samples, need at least 8"));
    }
    let mut angles: Vec<f64> = boundary_angles.iter().map(|&a| normalize_angle(a)).collect();
    angles.sort_by(f64::total_cmp);
    if angles.windows(2).any(|w| w[1] - w[0] <= 1e-12) || angles[0] + TAU - angles[nb - 1] <= 1e-12 {
        return infeasible("boundary angles must be distinct".into());
    }
    let spacing = TAU / nb as f64;
    if spacing > 4.0 * h || spacing < h / 4.0 {
        return infeasible(format!("boundary spacing {spacing:.4} is incompatible with h = {h}"));
    }

    let rings = (1.0 / h).round().max(1.0) as usize;
    let mut vertices = vec![Vec2::ZERO];
    let mut ring_ids: Vec<Vec<usize>> = vec![vec![0]];
    let mut ring_angles: Vec<Vec<f64>> = vec![vec![0.0]];
    for j in 1..=rings {
        let r = j as f64 / rings as f64;
        let thetas: Vec<f64> = if j == rings {
            angles.clone()
        } else {
            let m = ((j * nb) as f64 / rings as f64).round().max(6.0) as usize;
            let shift = if j % 2 == 1 { 0.5 } else { 0.0 };
            (0..m).map(|i| TAU * (i as f64 + shift) / m as f64).collect()
        };
        let ids: Vec<usize> = thetas
            .iter()
            .map(|&t| {
                vertices.push(if j == rings { Vec2::from_angle(t) } else { Vec2::from_angle(t) * r });
                vertices.len() - 1
            })
            .collect();
        ring_ids.push(ids);
        ring_angles.push(thetas);
    }

    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let first = &ring_ids[1];
    for k in 0..first.len() {
        triangles.push([0, first[k], first[(k + 1) % first.len()]]);
    }
    for j in 2..=rings {
        stitch(&ring_ids[j - 1], &ring_angles[j - 1], &ring_ids[j], &ring_angles[j], &mut triangles);
    }

    let boundary_loop = ring_ids[rings].clone();
    let mut mesh = TriMesh { vertices, triangles, boundary_loop, radius: 1.0 };
    delaunay_flips(&mut mesh);
    for _ in 0..4 {
        laplacian_smooth(&mut mesh);
        delaunay_flips(&mut mesh);
    }
    mesh.validate()?;
    Ok(mesh)
}

/// Triangulates the band between two rings given in increasing angle order.
fn stitch(inner: &[usize], inner_t: &[f64], outer: &[usize], outer_t: &[f64], out: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    // start the outer ring at the vertex closest in angle to inner[0]
    let o0 = (0..no)
        .min_by(|&a, &b| {
            let da = (outer_t[a] - inner_t[0]).rem_euclid(TAU).min((inner_t[0] - outer_t[a]).rem_euclid(TAU));
            let db = (outer_t[b] - inner_t[0]).rem_euclid(TAU).min((inner_t[0] - outer_t[b]).rem_euclid(TAU));
            da.total_cmp(&db)
        })
        .unwrap();
    let unwrap_in = |k: usize| inner_t[k % ni] - inner_t[0] + if k >= ni { TAU } else { 0.0 };
    let unwrap_out = |k: usize| {
        let raw = outer_t[(o0 + k) % no] - inner_t[0];
        let base = if raw < -std::f64::consts::PI { raw + TAU } else if raw > std::f64::consts::PI { raw - TAU } else { raw };
        // keep the sequence increasing after the start vertex
        let mut v = base;
        if k > 0 {
            while v < unwrap_out_start(outer_t, o0, inner_t[0]) {
                v += TAU;
            }
        }
        v + if k >= no { TAU } else { 0.0 }
    };
    let (mut i, mut o) = (0usize, 0usize);
    while i < ni || o < no {
        let advance_outer = if i == ni {
            true
        } else if o == no {
            false
        } else {
            unwrap_out(o + 1) <= unwrap_in(i + 1)
        };
        if advance_outer {
            out.push([inner[i % ni], outer[(o0 + o) % no], outer[(o0 + o + 1) % no]]);
            o += 1;
        } else {
            out.push([inner[i % ni], outer[(o0 + o) % no], inner[(i + 1) % ni]]);
            i += 1;
        }
    }
}

fn unwrap_out_start(outer_t: &[f64], o0: usize, ref_angle: f64) -> f64 {
    let raw = outer_t[o0] - ref_angle;
    if raw < -std::f64::consts::PI {
        raw + TAU
    } else if raw > std::f64::consts::PI {
        raw - TAU
    } else {
        raw
    }
}

/// Lawson flips until every interior edge is locally Delaunay.
pub(crate) fn delaunay_flips(mesh: &mut TriMesh) {
    let coord = |p: Vec2| robust::Coord { x: p.x, y: p.y };
    for _pass in 0..200 {
        let mut edge_map: HashMap<(usize, usize), (usize, usize)> = HashMap::with_capacity(mesh.triangles.len() * 3);
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                edge_map.insert((tri[k], tri[(k + 1) % 3]), (t, k));
            }
        }
        let mut touched = vec![false; mesh.triangles.len()];
        let mut flips = 0;
        for t in 0..mesh.triangles.len() {
            for k in 0..3 {
                if touched[t] {
                    break;
                }
                let tri = mesh.triangles[t];
                let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let Some(&(u, l)) = edge_map.get(&(b, a)) else { continue };
                if touched[u] {
                    continue;
                }
                let other = mesh.triangles[u];
                let d = other[(l + 2) % 3];
                let v = &mesh.vertices;
                let inside = robust::incircle(coord(v[a]), coord(v[b]), coord(v[c]), coord(v[d]));
                if inside <= 0.0 {
                    continue;
                }
                if orient(v[c], v[a], v[d]) <= 0.0 || orient(v[d], v[b], v[c]) <= 0.0 {
                    continue;
                }
                mesh.triangles[t] = [c, a, d];
                mesh.triangles[u] = [d, b, c];
                touched[t] = true;
                touched[u] = true;
                flips += 1;
            }
        }
        if flips == 0 {
            return;
        }
    }
}

/// Moves every interior vertex to the mean of its neighbours when that keeps
/// all incident triangles positively oriented.
fn laplacian_smooth(mesh: &mut TriMesh) {
    let nv = mesh.vertices.len();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        for (i, j) in [(a, b), (b, c), (c, a)] {
            nbrs[i].push(j);
            nbrs[j].push(i);
        }
        for i in [a, b, c] {
            incident[i].push(t);
        }
    }
    let boundary = mesh.boundary_mask();
    for v in 0..nv {
        if boundary[v] {
            continue;
        }
        let mut ns = nbrs[v].clone();
        ns.sort_unstable();
        ns.dedup();
        let mean = ns.iter().fold(Vec2::ZERO, |acc, &j| acc + mesh.vertices[j]) * (1.0 / ns.len() as f64);
        let old = mesh.vertices[v];
        mesh.vertices[v] = mean;
        let ok = incident[v].iter().all(|&t| {
            let [a, b, c] = mesh.triangles[t];
            orient(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]) > 0.0
        });
        if !ok {
            mesh.vertices[v] = old;
        }
    }
}
