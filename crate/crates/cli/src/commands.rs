use bv_plateau::bv_curve::{completed_curve, mollify_sequence, ClosedPolyline, Curve};
use bv_plateau::homogeneous::{
    assemble, tangential_variation, total_variation_du, ExtensionParams, HomogeneousError,
};
use bv_plateau::plateau::{
    plateau_solve, winding_area_grid, Arrangement, GridEstimate, PlateauCertificate, PlateauError, PlateauOptions,
};
use bv_plateau::relaxation_lab::{
    plateau_filler, recovery_sequence_with, slicing_check, strict_convergence_report_with, LabError, RecoveryOptions,
};
use bv_plateau::CurveError;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{
    load_curve, load_input, CommonArgs, ConfigError, Input, PlateauArgs, RecoveryArgs, RunConfig, SliceArgs,
    TangentialArgs,
};
use crate::svg;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

/// Everything a command writes.
pub struct Outcome {
    pub config: RunConfig,
    pub result: Value,
    pub csv: Option<String>,
    pub figures: Vec<(&'static str, String)>,
    /// False when an iterative solve stopped at its iteration cap.
    pub converged: bool,
}

impl Outcome {
    fn new(config: RunConfig, result: impl Serialize) -> Outcome {
        Outcome {
            config,
            result: serde_json::to_value(result).expect("report values serialize"),
            csv: None,
            figures: Vec::new(),
            converged: true,
        }
    }
}

fn params(a: &CommonArgs) -> ExtensionParams {
    ExtensionParams { radius: a.radius, nodes: a.nodes }
}

fn plateau_options(a: &CommonArgs) -> PlateauOptions {
    PlateauOptions { h: a.h, delta_schedule: a.delta.clone(), max_iters: a.max_iters, n_vertices: a.n_vertices }
}

fn vertex_csv(poly: &ClosedPolyline) -> String {
    let mut s = String::from("x,y\n");
    for p in poly.open_vertices() {
        s.push_str(&format!("{:e},{:e}\n", p.x, p.y));
    }
    s
}

fn curve_figure(poly: &ClosedPolyline) -> String {
    let arrangement = if poly.is_degenerate() { None } else { Arrangement::build(poly).ok() };
    svg::curve_figure(poly, arrangement.as_ref())
}

pub fn tv(a: &CommonArgs) -> Result<Outcome, CommandError> {
    let config = RunConfig::from_common("tv", a)?;
    let curve = load_curve(a)?;
    let d = curve.total_variation();
    let mut out = Outcome::new(
        config,
        json!({
            "decomposition": d,
            "arcs": curve.arcs().len(),
            "jumps": curve.jumps().len(),
            "lipschitz": curve.is_lipschitz(),
        }),
    );
    out.csv = Some(format!(
        "ac_mass,jump_mass,cantor_mass,total\n{:e},{:e},{:e},{:e}\n",
        d.ac_mass, d.jump_mass, d.cantor_mass, d.total
    ));
    Ok(out)
}

pub fn complete(a: &CommonArgs) -> Result<Outcome, CommandError> {
    let config = RunConfig::from_common("complete", a)?;
    let curve = load_curve(a)?;
    let poly = completed_curve(&curve, a.n_vertices);
    let vertices: Vec<[f64; 2]> = poly.open_vertices().iter().map(|p| [p.x, p.y]).collect();
    let mut out = Outcome::new(
        config,
        json!({
            "length": poly.length(),
            "total_variation": curve.total_variation().total,
            "vertices": vertices,
        }),
    );
    out.csv = Some(vertex_csv(&poly));
    if a.svg {
        out.figures.push(("curve.svg", curve_figure(&poly)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PlateauResult {
    certificate: PlateauCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_oracle: Option<GridEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_agrees: Option<bool>,
}

fn boundary_of(input: &Input, n_vertices: usize) -> ClosedPolyline {
    match input {
        Input::Curve(c) => completed_curve(c, n_vertices),
        Input::Polyline(p) => p.clone(),
    }
}

pub fn plateau(a: &PlateauArgs) -> Result<Outcome, CommandError> {
    let mut config = RunConfig::from_common("plateau", &a.common)?;
    let input = load_input(a)?;
    if let Some(path) = &a.polyline {
        config.curve_source = path.display().to_string();
    }
    config.grid_resolution = Some(a.grid);
    let poly = boundary_of(&input, a.common.n_vertices);
    let (certificate, run) = plateau_solve(&poly, &plateau_options(&a.common))?;
    let grid_oracle = (a.grid > 0).then(|| winding_area_grid(&poly, a.grid, a.common.seed));
    let grid_agrees = grid_oracle.map(|g| g.agrees_with(certificate.lower, 4.0));
    let converged = certificate.converged;
    let csv = format!(
        "lower,upper,sampling_gap,relative_gap,iterations,converged\n{:e},{:e},{:e},{:e},{},{}\n",
        certificate.lower,
        certificate.upper,
        certificate.sampling_gap,
        certificate.relative_gap,
        certificate.iterations,
        certificate.converged
    );
    let mut out = Outcome::new(config, PlateauResult { certificate, grid_oracle, grid_agrees });
    out.csv = Some(csv);
    out.converged = converged;
    if a.common.svg {
        out.figures.push(("curve.svg", curve_figure(&poly)));
        if let Some(run) = &run {
            out.figures.push(("mesh.svg", svg::mesh_figure(&run.map)));
        }
    }
    Ok(out)
}

fn certificate_for(curve: &Curve, a: &CommonArgs) -> Result<(ClosedPolyline, PlateauCertificate), CommandError> {
    let opts = plateau_options(a);
    let poly = completed_curve(curve, a.n_vertices);
    let (cert, _) = plateau_solve(&poly, &opts)?;
    Ok((poly, cert))
}

pub fn area(a: &CommonArgs) -> Result<Outcome, CommandError> {
    let config = RunConfig::from_common("area", a)?;
    let curve = load_curve(a)?;
    let p = params(a);
    p.validate()?;
    let (poly, cert) = certificate_for(&curve, a)?;
    let report = assemble(&curve, &p, cert);
    let csv = format!(
        "graph_area_term,singular_term,plateau_lower,plateau_upper,relaxed_area_lower,relaxed_area_upper\n{:e},{:e},{:e},{:e},{:e},{:e}\n",
        report.graph_area_term,
        report.singular_term,
        report.tvj_lower,
        report.tvj_upper,
        report.relaxed_area_lower,
        report.relaxed_area_upper
    );
    let converged = report.plateau.converged;
    let mut out = Outcome::new(config, report);
    out.csv = Some(csv);
    out.converged = converged;
    if a.svg {
        out.figures.push(("curve.svg", curve_figure(&poly)));
    }
    Ok(out)
}

pub fn tangential(a: &TangentialArgs) -> Result<Outcome, CommandError> {
    let mut config = RunConfig::from_common("tangential", &a.common)?;
    config.eps = Some(a.eps);
    let curve = load_curve(&a.common)?;
    let p = params(&a.common);
    let value = tangential_variation(&curve, a.eps, &p)?;
    Ok(Outcome::new(
        config,
        json!({
            "eps": a.eps,
            "radius": p.radius,
            "tangential_variation": value,
            "total_variation_du": total_variation_du(&curve, &p),
        }),
    ))
}

pub fn verify_recovery(a: &RecoveryArgs) -> Result<Outcome, CommandError> {
    let mut config = RunConfig::from_common("verify-recovery", &a.common)?;
    let mollify = a.mollify_ks.clone().unwrap_or_else(|| a.ks.clone());
    if mollify.len() != a.ks.len() {
        return Err(ConfigError::Invalid(format!(
            "--mollify-ks needs one entry per --ks entry ({} given, {} expected)",
            mollify.len(),
            a.ks.len()
        ))
        .into());
    }
    config.ks = Some(a.ks.clone());
    config.mollify_ks = Some(mollify.clone());
    let curve = load_curve(&a.common)?;
    let options =
        RecoveryOptions { h: a.common.h, delta_schedule: a.common.delta.clone(), max_iters: a.common.max_iters };
    let p = params(&a.common);
    let report = strict_convergence_report_with(&curve, &p, &a.ks, &mollify, &options)?;
    let converged = report.rows.iter().all(|r| r.filler_converged);
    let csv = report.to_csv();
    let mut out = Outcome::new(config, report);
    out.csv = Some(csv);
    out.converged = converged;
    if a.common.svg {
        // the map of the largest k
        let (k, km) = (a.ks[a.ks.len() - 1], mollify[mollify.len() - 1]);
        let filler = plateau_filler(&mollify_sequence(&curve, km), &options)?;
        let v = recovery_sequence_with(&curve, &p, k, km, &filler.map)?;
        out.figures.push(("mesh.svg", svg::mesh_figure(&v)));
    }
    Ok(out)
}

pub fn slice_check(a: &SliceArgs) -> Result<Outcome, CommandError> {
    let mut config = RunConfig::from_common("slice-check", &a.common)?;
    config.eps = Some(a.eps);
    config.n_radii = Some(a.n_radii);
    let curve = load_curve(&a.common)?;
    let report = slicing_check(&curve, &params(&a.common), a.eps, a.n_radii)?;
    let csv = report.to_csv();
    let mut out = Outcome::new(config, report);
    out.csv = Some(csv);
    Ok(out)
}
