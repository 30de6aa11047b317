//! Numerical checks of the relaxation machinery: the classical area
//! functional on discrete maps, explicit recovery sequences, strict
//! convergence of mollified data, and the slice formula for the tangential
//! variation.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bv_curve::{completed_curve, mollify_sequence, Curve, MollifiedCurve, Side};
use crate::geom::{pairwise_sum, Vec2, TAU};
use crate::homogeneous::{graph_area_term, singular_term, tangential_variation, ExtensionParams, HomogeneousError};
use crate::plateau::{
    homogeneous_guess, make_disk_mesh_with_angles, merge_angles, minimize_from, winding_area, DiscreteMap,
    Minimized, PlateauError, TriMesh, DEFAULT_DELTAS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("recovery index k must be at least 2, got {0}")]
    BadIndex(usize),
    #[error("filler boundary vertex {vertex} is off the datum by {gap:e}")]
    BoundaryMismatch { vertex: usize, gap: f64 },
    #[error("indices {0:?} must be strictly increasing and at least 2")]
    BadIndices(Vec<usize>),
    #[error("need at least one radius")]
    NoRadii,
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
}

/// Per-triangle gradient matrix `[[∂₁v₁, ∂₂v₁], [∂₁v₂, ∂₂v₂]]`.
fn gradient(p: [Vec2; 3], v: [Vec2; 3]) -> [[f64; 2]; 2] {
    let (e1, e2) = (p[1] - p[0], p[2] - p[0]);
    let (f1, f2) = (v[1] - v[0], v[2] - v[0]);
    let det = e1.cross(e2);
    // inverse of [e1 e2] applied on the right
    let inv = [[e2.y / det, -e2.x / det], [-e1.y / det, e1.x / det]];
    [
        [f1.x * inv[0][0] + f2.x * inv[1][0], f1.x * inv[0][1] + f2.x * inv[1][1]],
        [f1.y * inv[0][0] + f2.y * inv[1][0], f1.y * inv[0][1] + f2.y * inv[1][1]],
    ]
}

/// `Σ area·√(1 + |G|² + J²)`, the area of the graph of a piecewise-affine map.
pub fn area_functional(map: &DiscreteMap) -> f64 {
    let p = &map.mesh.vertices;
    let v = &map.values;
    let terms: Vec<f64> = map
        .mesh
        .triangles
        .par_iter()
        .map(|&[a, b, c]| {
            let g = gradient([p[a], p[b], p[c]], [v[a], v[b], v[c]]);
            let frob = g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1];
            let j = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let area = 0.5 * (p[b] - p[a]).cross(p[c] - p[a]);
            area * (1.0 + frob + j * j).sqrt()
        })
        .collect();
    pairwise_sum(&terms)
}

/// `∫|Jv|` of a piecewise-affine map.
pub fn jacobian_tv(map: &DiscreteMap) -> f64 {
    map.energy(0.0)
}

/// Discretization settings for fillers and recovery maps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryOptions {
    /// Target edge length of the filler mesh; also sets the angular spacing
    /// of the outer annulus.
    pub h: f64,
    pub delta_schedule: Vec<f64>,
    pub max_iters: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { h: 0.05, delta_schedule: DEFAULT_DELTAS.to_vec(), max_iters: 20_000 }
    }
}

/// Near-minimizer of `∫|Jv|` on the unit disk with boundary values `φ(θ)`.
/// The mesh boundary contains the kinks of `φ`, so the boundary polygon is
/// `φ` itself whenever `φ` is piecewise linear in `θ`.
pub fn plateau_filler(datum: &MollifiedCurve, options: &RecoveryOptions) -> Result<Minimized, LabError> {
    let n = ((TAU / options.h).round() as usize).max(8);
    let uniform: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let kinks = datum.breakpoints();
    let angles = if kinks.len() > n / 2 { uniform } else { merge_angles(&uniform, &kinks, 0.25 * TAU / n as f64) };
    let mesh = make_disk_mesh_with_angles(options.h, &angles)?;
    let center = datum.dense_polyline(4096).centroid();
    let start = homogeneous_guess(&mesh, |t| datum.evaluate(t), center);
    Ok(minimize_from(mesh, start, &options.delta_schedule, options.max_iters)?)
}

/// Recovery map `v_k`: the homogeneous extension of `φ_k` on the annulus
/// `ℓ/k < |x| < ℓ` and the filler shrunk into `B_{ℓ/k}`. The mollifier and
/// the shrinking disk share the index `k`.
pub fn recovery_sequence(
    curve: &Curve,
    params: &ExtensionParams,
    k: usize,
    filler: &DiscreteMap,
) -> Result<DiscreteMap, LabError> {
    recovery_sequence_with(curve, params, k, k, filler)
}

/// [`recovery_sequence`] with separate shrinking index `k` and mollifier
/// index `k_mollify`.
///
/// The annulus is meshed in log-polar coordinates along the rays through the
/// filler's boundary vertices. Values are constant along rays, so `Jv = 0`
/// exactly on the annulus.
pub fn recovery_sequence_with(
    curve: &Curve,
    params: &ExtensionParams,
    k: usize,
    k_mollify: usize,
    filler: &DiscreteMap,
) -> Result<DiscreteMap, LabError> {
    params.validate()?;
    if k < 2 {
        return Err(LabError::BadIndex(k));
    }
    if k_mollify < 1 {
        return Err(LabError::BadIndex(k_mollify));
    }
    let datum = mollify_sequence(curve, k_mollify);
    let fm = &filler.mesh;
    let ell = params.radius;
    let inner = ell / k as f64;
    let shrink = inner / fm.radius;

    let scale = filler.values.iter().fold(1f64, |m, v| m.max(v.norm()));
    let dirs: Vec<Vec2> = fm.boundary_loop.iter().map(|&i| fm.vertices[i] * (1.0 / fm.radius)).collect();
    let ray_values: Vec<Vec2> = fm.boundary_loop.iter().map(|&i| datum.evaluate(fm.vertices[i].angle())).collect();
    for (&i, want) in fm.boundary_loop.iter().zip(&ray_values) {
        let gap = filler.values[i].dist(*want);
        if gap > 1e-9 * scale {
            return Err(LabError::BoundaryMismatch { vertex: i, gap });
        }
    }

    let mut vertices: Vec<Vec2> = fm.vertices.iter().map(|&x| x * shrink).collect();
    let mut values = filler.values.clone();
    let mut triangles = fm.triangles.clone();
    let n = dirs.len();
    let dtheta = TAU / n as f64;
    let rings = ((k as f64).ln() / dtheta).ceil().max(1.0) as usize;
    let mut prev: Vec<usize> = fm.boundary_loop.clone();
    for j in 1..=rings {
        let r = if j == rings { ell } else { inner * (ell / inner).powf(j as f64 / rings as f64) };
        let ids: Vec<usize> = (0..n)
            .map(|i| {
                vertices.push(dirs[i] * r);
                values.push(ray_values[i]);
                vertices.len() - 1
            })
            .collect();
        for i in 0..n {
            let i1 = (i + 1) % n;
            triangles.push([prev[i], ids[i], ids[i1]]);
            triangles.push([prev[i], ids[i1], prev[i1]]);
        }
        prev = ids;
    }
    let mesh = TriMesh { vertices, triangles, boundary_loop: prev, radius: ell };
    mesh.validate()?;
    Ok(DiscreteMap { mesh, values })
}

/// One row per `k` of [`strict_convergence_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceRow {
    pub k: usize,
    /// Mollifier index used for `φ`.
    pub k_mollify: usize,
    pub window_width: f64,
    /// `‖u_k − u‖_{L¹(B_ℓ)}`.
    pub l1_error: f64,
    /// `|Du_k|(B_ℓ) = ℓ·TV(φ_k)`.
    pub tv: f64,
    /// Area functional of the recovery map.
    pub area: f64,
    /// `∫|Jv_k|` over the recovery mesh.
    pub jacobian_tv: f64,
    /// `∫|J filler|` over the unit disk.
    pub filler_tv: f64,
    pub filler_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub params: ExtensionParams,
    pub options: RecoveryOptions,
    pub rows: Vec<SequenceRow>,
    /// `ℓ·TV(γ)`.
    pub tv_target: f64,
    /// Graph area + singular term + winding area of the completed curve.
    pub area_target: f64,
    pub tv_nondecreasing: bool,
    pub tv_bounded: bool,
    pub l1_nonincreasing: bool,
    /// Relative distance of the last TV entry to the target.
    pub final_tv_error: f64,
    /// Relative distance of the last area entry to `area_target`.
    pub final_area_error: f64,
    pub final_l1: f64,
}

impl SequenceReport {
    pub fn ks(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.k).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,k_mollify,window_width,l1_error,tv,area,jacobian_tv,filler_tv,filler_converged\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
                r.k, r.k_mollify, r.window_width, r.l1_error, r.tv, r.area, r.jacobian_tv, r.filler_tv, r.filler_converged
            ));
        }
        s
    }
}

/// Builds `u_k` and the recovery maps `v_k` for each `k` and records how they
/// approach `u` and the relaxed area.
pub fn strict_convergence_report(
    curve: &Curve,
    params: &ExtensionParams,
    ks: &[usize],
    options: &RecoveryOptions,
) -> Result<SequenceReport, LabError> {
    strict_convergence_report_with(curve, params, ks, ks, options)
}

/// [`strict_convergence_report`] with the mollifier index of each row given
/// separately from the shrinking index.
pub fn strict_convergence_report_with(
    curve: &Curve,
    params: &ExtensionParams,
    ks: &[usize],
    k_mollify: &[usize],
    options: &RecoveryOptions,
) -> Result<SequenceReport, LabError> {
    params.validate()?;
    if ks.is_empty() || ks[0] < 2 || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::BadIndices(ks.to_vec()));
    }
    if k_mollify.len() != ks.len() || k_mollify.contains(&0) {
        return Err(LabError::BadIndices(k_mollify.to_vec()));
    }
    let ell = params.radius;
    let pairs: Vec<(usize, usize)> = ks.iter().copied().zip(k_mollify.iter().copied()).collect();
    let rows: Vec<SequenceRow> = pairs
        .par_iter()
        .map(|&(k, km)| -> Result<SequenceRow, LabError> {
            let phi = mollify_sequence(curve, km);
            let filler = plateau_filler(&phi, options)?;
            let v = recovery_sequence_with(curve, params, k, km, &filler.map)?;
            Ok(SequenceRow {
                k,
                k_mollify: km,
                window_width: phi.window_width(),
                l1_error: l1_distance(&phi, params),
                tv: ell * phi.total_variation(),
                area: area_functional(&v),
                jacobian_tv: jacobian_tv(&v),
                filler_tv: filler.upper,
                filler_converged: filler.converged,
            })
        })
        .collect::<Result<_, _>>()?;
    let tv_target = ell * curve.total_variation().total;
    let poly = completed_curve(curve, 1024);
    let plateau_lower = if poly.is_degenerate() { 0.0 } else { winding_area(&poly)? };
    let area_target = graph_area_term(curve, params) + singular_term(curve, params) + plateau_lower;
    let last = rows.last().unwrap();
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { (a - b).abs() / b.abs() };
    Ok(SequenceReport {
        params: *params,
        options: options.clone(),
        tv_nondecreasing: rows.windows(2).all(|w| w[1].tv >= w[0].tv - 1e-12 * tv_target),
        tv_bounded: rows.iter().all(|r| r.tv <= tv_target * (1.0 + 1e-12)),
        l1_nonincreasing: rows.windows(2).all(|w| w[1].l1_error <= w[0].l1_error),
        final_tv_error: rel(last.tv, tv_target),
        final_area_error: rel(last.area, area_target),
        final_l1: last.l1_error,
        tv_target,
        area_target,
        rows,
    })
}

/// `‖u_k − u‖_{L¹(B_ℓ)}` by polar midpoint quadrature: 256 radii times
/// `params.nodes` angles.
pub fn l1_distance(phi: &MollifiedCurve, params: &ExtensionParams) -> f64 {
    let nr = 256;
    let dr = params.radius / nr as f64;
    let radial: Vec<f64> = (0..nr).map(|i| (i as f64 + 0.5) * dr * dr).collect();
    pairwise_sum(&radial) * phi.l1_distance(params.nodes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceReport {
    pub eps: f64,
    pub radii: Vec<f64>,
    /// Discrete variation of `u` restricted to each circle.
    pub slice_tv: Vec<f64>,
    pub integrated: f64,
    pub exact: f64,
    pub relative_error: f64,
}

impl SliceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("radius,slice_tv\n");
        for (r, t) in self.radii.iter().zip(&self.slice_tv) {
            s.push_str(&format!("{r:e},{t:e}\n"));
        }
        s
    }
}

/// Variation of `u` on the circle of radius `r`, sampled at `nodes` uniform
/// angles plus every breakpoint. Jumps enter with both one-sided values, so
/// each atom is counted exactly.
pub fn slice_variation(curve: &Curve, r: f64, nodes: usize) -> f64 {
    let u = |x: Vec2, side: Side| curve.evaluate(x.angle(), side);
    let mut thetas: Vec<f64> = (0..nodes).map(|i| TAU * i as f64 / nodes as f64).collect();
    let jumps: Vec<f64> = curve.jumps().iter().map(|j| j.theta).collect();
    thetas.extend(curve.breakpoints());
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let mut pts: Vec<Vec2> = Vec::with_capacity(thetas.len() + jumps.len());
    for &t in &thetas {
        let x = Vec2::from_angle(t) * r;
        if jumps.contains(&t) {
            pts.push(u(x, Side::Left));
        }
        pts.push(u(x, Side::Right));
    }
    let first = pts[0];
    pts.push(first);
    let steps: Vec<f64> = pts.windows(2).map(|w| w[0].dist(w[1])).collect();
    pairwise_sum(&steps)
}

/// Integrates the slice variation over `eps < r < ℓ` by the midpoint rule on
/// `n_radii` radii and compares with the tangential variation.
pub fn slicing_check(curve: &Curve, params: &ExtensionParams, eps: f64, n_radii: usize) -> Result<SliceReport, LabError> {
    params.validate()?;
    let exact = tangential_variation(curve, eps, params)?;
    if n_radii == 0 {
        return Err(LabError::NoRadii);
    }
    let dr = (params.radius - eps) / n_radii as f64;
    let radii: Vec<f64> = (0..n_radii).map(|i| eps + (i as f64 + 0.5) * dr).collect();
    let slice_tv: Vec<f64> = radii.par_iter().map(|&r| slice_variation(curve, r, params.nodes)).collect();
    let integrated = pairwise_sum(&slice_tv.iter().map(|t| t * dr).collect::<Vec<_>>());
    let relative_error = if exact == 0.0 { integrated.abs() } else { (integrated - exact).abs() / exact };
    Ok(SliceReport { eps, radii, slice_tv, integrated, exact, relative_error })
}
