//! Energies of the 0-homogeneous extension `u(x) = γ(x/|x|)` on the disk
//! `B_ℓ`.
//!
//! For such maps `|∇u(ρ, θ)| = m(θ)/ρ` where `m` is the density of the
//! absolutely continuous part of `γ̇`, so every radial integral has a closed
//! form and only an angular sum over the density cells remains.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bv_curve::{Curve, Side};
use crate::geom::{pairwise_sum, Vec2};
use crate::plateau::{plateau_value, DiscreteMap, PlateauCertificate, PlateauError, PlateauOptions, TriMesh};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomogeneousError {
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("angular node count must be even and at least 64, got {0}")]
    BadNodes(usize),
    #[error("inner radius {eps} must satisfy 0 ≤ eps < {radius}")]
    BadInnerRadius { eps: f64, radius: f64 },
    #[error("mesh radius {mesh} does not match the extension radius {radius}")]
    MeshRadius { mesh: f64, radius: f64 },
    #[error(transparent)]
    Plateau(#[from] PlateauError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionParams {
    /// Radius `ℓ` of the disk.
    pub radius: f64,
    /// Angular quadrature nodes, used where no closed form is available.
    pub nodes: usize,
}

impl Default for ExtensionParams {
    fn default() -> Self {
        ExtensionParams { radius: 1.0, nodes: 4096 }
    }
}

impl ExtensionParams {
    pub fn with_radius(radius: f64) -> Self {
        ExtensionParams { radius, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), HomogeneousError> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(HomogeneousError::BadRadius(self.radius));
        }
        if self.nodes < 64 || !self.nodes.is_multiple_of(2) {
            return Err(HomogeneousError::BadNodes(self.nodes));
        }
        Ok(())
    }
}

/// `∫₀^r √(ρ² + m²) dρ`.
pub fn radial_area(r: f64, m: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if m < 1e-14 * r {
        return 0.5 * r * r;
    }
    0.5 * (r * r.hypot(m) + m * m * (r / m).asinh())
}

/// Angular cells `(width, density)` on which `|γ̇ᵃ|` is constant.
pub fn ac_density_cells(curve: &Curve) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for arc in curve.arcs() {
        for (u0, u1, inc) in arc.ac.cell_increments() {
            let width = (u1 - u0) * arc.span;
            if width > 0.0 {
                out.push((width, inc / width));
            }
        }
    }
    out
}

fn annulus_graph_area(curve: &Curve, inner: f64, outer: f64) -> f64 {
    let cells = ac_density_cells(curve);
    let terms: Vec<f64> =
        cells.par_iter().map(|&(w, m)| w * (radial_area(outer, m) - radial_area(inner, m))).collect();
    pairwise_sum(&terms)
}

/// `∫_{B_ℓ} √(1 + |∇u|²) dx`.
pub fn graph_area_term(curve: &Curve, params: &ExtensionParams) -> f64 {
    annulus_graph_area(curve, 0.0, params.radius)
}

/// `|Dˢu|(B_ℓ) = ℓ·(jump mass + Cantor mass)`.
pub fn singular_term(curve: &Curve, params: &ExtensionParams) -> f64 {
    let tv = curve.total_variation();
    params.radius * (tv.jump_mass + tv.cantor_mass)
}

/// `|Du|(B_ℓ) = ℓ·|γ̇|(S¹)`.
pub fn total_variation_du(curve: &Curve, params: &ExtensionParams) -> f64 {
    params.radius * curve.total_variation().total
}

/// Tangential variation on the annulus `eps < |x| < ℓ`. For a homogeneous
/// map every slice carries the full variation of `γ`.
pub fn tangential_variation(curve: &Curve, eps: f64, params: &ExtensionParams) -> Result<f64, HomogeneousError> {
    if !(eps >= 0.0 && eps < params.radius) {
        return Err(HomogeneousError::BadInnerRadius { eps, radius: params.radius });
    }
    Ok((params.radius - eps) * curve.total_variation().total)
}

/// Value assigned at the origin, where `u` is undefined.
pub fn center_value(curve: &Curve, params: &ExtensionParams) -> Vec2 {
    curve.angular_mean(params.nodes)
}

/// `u` at the vertices of a mesh of the disk `B_ℓ`; the origin gets
/// [`center_value`].
pub fn sample_extension(curve: &Curve, mesh: &TriMesh, params: &ExtensionParams) -> Result<DiscreteMap, HomogeneousError> {
    if (mesh.radius - params.radius).abs() > 1e-12 * params.radius {
        return Err(HomogeneousError::MeshRadius { mesh: mesh.radius, radius: params.radius });
    }
    let center = center_value(curve, params);
    let values = mesh
        .vertices
        .iter()
        .map(|&x| if x == Vec2::ZERO { center } else { curve.evaluate(x.angle(), Side::Right) })
        .collect();
    Ok(DiscreteMap { mesh: mesh.clone(), values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub params: ExtensionParams,
    pub graph_area_term: f64,
    pub singular_term: f64,
    pub plateau: PlateauCertificate,
    pub relaxed_area_lower: f64,
    pub relaxed_area_upper: f64,
    pub tvj_lower: f64,
    pub tvj_upper: f64,
    pub total_variation_du: f64,
    /// The value of `u` at the origin used by sampled maps.
    pub center_value: Vec2,
}

/// Relaxed area `∫√(1+|∇u|²) + |Dˢu|(B_ℓ) + P̄(γ)` and relaxed Jacobian total
/// variation `P̄(γ)`, with the Plateau value given as an interval.
pub fn relaxed_area(
    curve: &Curve,
    params: &ExtensionParams,
    plateau_options: &PlateauOptions,
) -> Result<EnergyReport, HomogeneousError> {
    params.validate()?;
    let plateau = plateau_value(curve, plateau_options)?;
    Ok(assemble(curve, params, plateau))
}

/// Like [`relaxed_area`] with a precomputed Plateau certificate.
pub fn assemble(curve: &Curve, params: &ExtensionParams, plateau: PlateauCertificate) -> EnergyReport {
    let graph = graph_area_term(curve, params);
    let singular = singular_term(curve, params);
    EnergyReport {
        params: *params,
        graph_area_term: graph,
        singular_term: singular,
        relaxed_area_lower: graph + singular + plateau.lower,
        relaxed_area_upper: graph + singular + plateau.upper,
        tvj_lower: plateau.lower,
        tvj_upper: plateau.upper,
        total_variation_du: total_variation_du(curve, params),
        center_value: center_value(curve, params),
        plateau,
    }
}

/// Open sets centred at the origin on which the relaxed area measure is
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

/// The relaxed area measure of `region` as `[lower, upper]`. The Plateau
/// atom at the origin counts only when the region contains it.
pub fn area_measure(
    curve: &Curve,
    region: Region,
    plateau: &PlateauCertificate,
) -> Result<(f64, f64), HomogeneousError> {
    let (inner, outer, atom) = match region {
        Region::Disk { radius } => (0.0, radius, true),
        Region::Annulus { inner, outer } => (inner, outer, false),
    };
    if !(inner >= 0.0 && outer > inner && outer.is_finite()) {
        return Err(HomogeneousError::BadInnerRadius { eps: inner, radius: outer });
    }
    let tv = curve.total_variation();
    let smooth = annulus_graph_area(curve, inner, outer) + (outer - inner) * (tv.jump_mass + tv.cantor_mass);
    if atom {
        Ok((smooth + plateau.lower, smooth + plateau.upper))
    } else {
        Ok((smooth, smooth))
    }
}
