//! Discrete minimization of `∫|Jv|` over piecewise-affine maps on a disk mesh.

use rayon::prelude::*;
use serde::Serialize;

use super::mesh::TriMesh;
use super::PlateauError;
use crate::bv_curve::ClosedPolyline;
use crate::geom::{pairwise_sum, Vec2};

pub const DEFAULT_DELTAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
pub const DEFAULT_MAX_ITERS: usize = 20_000;
pub const GRAD_TOL: f64 = 1e-8;

const ARMIJO_C: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MEMORY: usize = 8;

/// Piecewise-affine map given by its values at the mesh vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMap {
    pub mesh: TriMesh,
    pub values: Vec<Vec2>,
}

impl DiscreteMap {
    /// Jacobian determinant on each triangle.
    pub fn jacobians(&self) -> Vec<f64> {
        self.mesh
            .triangles
            .iter()
            .map(|&[a, b, c]| {
                let p = &self.mesh.vertices;
                let v = &self.values;
                (v[b] - v[a]).cross(v[c] - v[a]) / (p[b] - p[a]).cross(p[c] - p[a])
            })
            .collect()
    }

    /// `Σ area·√(J² + δ²)`; `δ = 0` gives `∫|Jv|`.
    pub fn energy(&self, delta: f64) -> f64 {
        Objective::new(&self.mesh).energy(&self.values, delta)
    }

    /// Affine interpolation at `x`; `None` outside the mesh.
    pub fn eval(&self, x: Vec2) -> Option<Vec2> {
        let p = &self.mesh.vertices;
        for &[a, b, c] in &self.mesh.triangles {
            let d = (p[b] - p[a]).cross(p[c] - p[a]);
            let l1 = (x - p[a]).cross(p[c] - p[a]) / d;
            let l2 = (p[b] - p[a]).cross(x - p[a]) / d;
            let l0 = 1.0 - l1 - l2;
            let tol = -1e-12;
            if l0 >= tol && l1 >= tol && l2 >= tol {
                return Some(self.values[a] * l0 + self.values[b] * l1 + self.values[c] * l2);
            }
        }
        None
    }
}

/// Outcome of [`jacobian_tv_minimize`].
#[derive(Debug, Clone, Serialize)]
pub struct Minimized {
    pub map: DiscreteMap,
    /// `Σ area·|J|` of the final map.
    pub upper: f64,
    /// Final smoothed energy for each `δ` of the schedule.
    pub smoothed: Vec<f64>,
    /// Iterations per `δ`.
    pub iterations: Vec<usize>,
    /// Whether the gradient tolerance was met at the last `δ`.
    pub converged: bool,
    /// Gradient ∞-norm at exit of the last `δ`.
    pub grad_norm: f64,
}

struct Objective<'a> {
    mesh: &'a TriMesh,
    /// Twice the domain area of each triangle.
    area2: Vec<f64>,
}

impl<'a> Objective<'a> {
    fn new(mesh: &'a TriMesh) -> Self {
        let p = &mesh.vertices;
        let area2 = mesh.triangles.iter().map(|&[a, b, c]| (p[b] - p[a]).cross(p[c] - p[a])).collect();
        Objective { mesh, area2 }
    }

    fn energy(&self, v: &[Vec2], delta: f64) -> f64 {
        let terms: Vec<f64> = self
            .mesh
            .triangles
            .par_iter()
            .zip(self.area2.par_iter())
            .map(|(&[a, b, c], &a2)| {
                let s = (v[b] - v[a]).cross(v[c] - v[a]);
                0.5 * a2 * (s / a2).hypot(delta)
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// Energy and gradient; gradient entries at `fixed` vertices are zero.
    fn energy_grad(&self, v: &[Vec2], delta: f64, fixed: &[bool]) -> (f64, Vec<Vec2>) {
        let per: Vec<(f64, [Vec2; 3])> = self
            .mesh
            .triangles
            .par_iter()
            .zip(self.area2.par_iter())
            .map(|(&[a, b, c], &a2)| {
                let s = (v[b] - v[a]).cross(v[c] - v[a]);
                let j = s / a2;
                let r = j.hypot(delta);
                let w = if r > 0.0 { 0.5 * j / r } else { 0.0 };
                let (va, vb, vc) = (v[a], v[b], v[c]);
                let ga = Vec2::new(vb.y - vc.y, vc.x - vb.x) * w;
                let gb = Vec2::new(vc.y - va.y, va.x - vc.x) * w;
                let gc = Vec2::new(va.y - vb.y, vb.x - va.x) * w;
                (0.5 * a2 * r, [ga, gb, gc])
            })
            .collect();
        let energies: Vec<f64> = per.iter().map(|p| p.0).collect();
        let mut g = vec![Vec2::ZERO; v.len()];
        for (tri, (_, gs)) in self.mesh.triangles.iter().zip(&per) {
            for k in 0..3 {
                g[tri[k]] += gs[k];
            }
        }
        for (gi, &f) in g.iter_mut().zip(fixed) {
            if f {
                *gi = Vec2::ZERO;
            }
        }
        (pairwise_sum(&energies), g)
    }
}

fn dot(a: &[Vec2], b: &[Vec2]) -> f64 {
    let terms: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.dot(*y)).collect();
    pairwise_sum(&terms)
}

fn inf_norm(g: &[Vec2]) -> f64 {
    g.iter().fold(0.0, |m, v| m.max(v.x.abs()).max(v.y.abs()))
}

/// The 0-homogeneous extension of `boundary` projected to the mesh vertices,
/// with `center` at the origin.
pub fn homogeneous_guess(mesh: &TriMesh, boundary: impl Fn(f64) -> Vec2, center: Vec2) -> Vec<Vec2> {
    let on_boundary = mesh.boundary_mask();
    mesh.vertices
        .iter()
        .zip(&on_boundary)
        .map(|(&x, &b)| if !b && x == Vec2::ZERO { center } else { boundary(x.angle()) })
        .collect()
}

/// Minimizes `Σ area·|J|` over maps with boundary values `poly(θ)` at the
/// mesh boundary angles, starting from the homogeneous extension centred at
/// the arclength centroid.
pub fn jacobian_tv_minimize(
    poly: &ClosedPolyline,
    mesh: &TriMesh,
    delta_schedule: &[f64],
    max_iters: usize,
) -> Result<Minimized, PlateauError> {
    let start = homogeneous_guess(mesh, |t| poly.point_at(t), poly.centroid());
    minimize_from(mesh.clone(), start, delta_schedule, max_iters)
}

/// Minimizes from an explicit initial map; boundary values of `start` are kept.
pub fn minimize_from(
    mesh: TriMesh,
    start: Vec<Vec2>,
    delta_schedule: &[f64],
    max_iters: usize,
) -> Result<Minimized, PlateauError> {
    if delta_schedule.is_empty()
        || delta_schedule.iter().any(|d| !(d.is_finite() && *d > 0.0))
        || delta_schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(PlateauError::BadSchedule { schedule: delta_schedule.to_vec() });
    }
    if start.len() != mesh.vertices.len() || start.iter().any(|v| !v.is_finite()) {
        return Err(PlateauError::InvalidMesh { reason: "initial values do not match the mesh".into() });
    }
    let fixed = mesh.boundary_mask();
    let obj = Objective::new(&mesh);
    let mut v = start;
    let mut smoothed = Vec::new();
    let mut iterations = Vec::new();
    let mut converged = false;
    let mut grad_norm = 0.0;
    for &delta in delta_schedule {
        let run = descend(&obj, &mut v, delta, &fixed, max_iters);
        smoothed.push(run.energy);
        iterations.push(run.iterations);
        converged = run.converged;
        grad_norm = run.grad_norm;
    }
    let upper = obj.energy(&v, 0.0);
    Ok(Minimized { map: DiscreteMap { mesh, values: v }, upper, smoothed, iterations, converged, grad_norm })
}

struct Run {
    energy: f64,
    iterations: usize,
    converged: bool,
    grad_norm: f64,
}

/// L-BFGS directions with Armijo backtracking; falls back to steepest descent
/// whenever the quasi-Newton direction is not a descent direction.
fn descend(obj: &Objective, v: &mut [Vec2], delta: f64, fixed: &[bool], max_iters: usize) -> Run {
    let (mut e, mut g) = obj.energy_grad(v, delta, fixed);
    let scale = v.iter().fold(0.0f64, |m, p| m.max(p.norm())).max(1e-300);
    let mut hist: Vec<(Vec<Vec2>, Vec<Vec2>, f64)> = Vec::new();
    let mut it = 0;
    while it < max_iters {
        let gn = inf_norm(&g);
        if gn < GRAD_TOL {
            return Run { energy: e, iterations: it, converged: true, grad_norm: gn };
        }
        let mut d = two_loop(&g, &hist);
        let mut slope = dot(&g, &d);
        let mut alpha = 1.0;
        if hist.is_empty() || slope >= 0.0 {
            hist.clear();
            d = g.iter().map(|&x| -x).collect();
            slope = -dot(&g, &g);
            alpha = 0.1 * scale / gn;
        }
        let mut accepted = None;
        for _ in 0..80 {
            let trial: Vec<Vec2> = v.iter().zip(&d).map(|(&x, &dx)| x + dx * alpha).collect();
            let (et, gt) = obj.energy_grad(&trial, delta, fixed);
            if et <= e + ARMIJO_C * alpha * slope {
                accepted = Some((trial, et, gt));
                break;
            }
            alpha *= BACKTRACK;
        }
        it += 1;
        let Some((trial, et, gt)) = accepted else {
            if hist.is_empty() {
                // no decrease even along the gradient: numerically stationary
                return Run { energy: e, iterations: it, converged: gn < GRAD_TOL, grad_norm: gn };
            }
            hist.clear();
            continue;
        };
        let s: Vec<Vec2> = trial.iter().zip(v.iter()).map(|(&a, &b)| a - b).collect();
        let y: Vec<Vec2> = gt.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if hist.len() == MEMORY {
                hist.remove(0);
            }
            hist.push((s, y, 1.0 / sy));
        }
        for (dst, src) in v.iter_mut().zip(&trial) {
            *dst = *src;
        }
        e = et;
        g = gt;
    }
    let gn = inf_norm(&g);
    Run { energy: e, iterations: it, converged: gn < GRAD_TOL, grad_norm: gn }
}

fn two_loop(g: &[Vec2], hist: &[(Vec<Vec2>, Vec<Vec2>, f64)]) -> Vec<Vec2> {
    let mut q: Vec<Vec2> = g.iter().map(|&x| -x).collect();
    let mut alphas = Vec::with_capacity(hist.len());
    for (s, y, rho) in hist.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi += *yi * (-a);
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = hist.last() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi = *qi * gamma;
        }
    }
    for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += *si * (a - b);
        }
    }
    q
}
