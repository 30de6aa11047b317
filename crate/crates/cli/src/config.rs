use std::path::PathBuf;

use bv_plateau::bv_curve::{parse_curve, Builtin, ClosedPolyline, Curve};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BV_PLATEAU_OUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Curve { path: String, message: String },
}

#[derive(Debug, Parser)]
#[command(name = "bv-plateau", version, about = "Relaxed area and Jacobian total variation of homogeneous maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total variation split into a.c., jump and Cantor parts.
    Tv(CommonArgs),
    /// The completed curve (jumps bridged by segments).
    Complete(CommonArgs),
    /// Bracket for the Plateau value of the completed curve.
    Plateau(PlateauArgs),
    /// Relaxed area of the homogeneous extension.
    Area(CommonArgs),
    /// Tangential variation on an annulus.
    Tangential(TangentialArgs),
    /// Recovery sequences and strict convergence of mollified data.
    VerifyRecovery(RecoveryArgs),
    /// Integrated slice variation against the tangential variation.
    SliceCheck(SliceArgs),
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Tv(a) | Command::Complete(a) | Command::Area(a) => a,
            Command::Plateau(a) => &a.common,
            Command::Tangential(a) => &a.common,
            Command::VerifyRecovery(a) => &a.common,
            Command::SliceCheck(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinName {
    Constant,
    Vortex,
    Triple,
    CantorArc,
    FigureEight,
}

impl From<BuiltinName> for Builtin {
    fn from(b: BuiltinName) -> Self {
        match b {
            BuiltinName::Constant => Builtin::Constant,
            BuiltinName::Vortex => Builtin::Vortex,
            BuiltinName::Triple => Builtin::Triple,
            BuiltinName::CantorArc => Builtin::CantorArc,
            BuiltinName::FigureEight => Builtin::FigureEight,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Curve file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    pub curve: Option<PathBuf>,
    /// Named built-in curve.
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinName>,
    /// Radius of the disk.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Target mesh edge length.
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    /// Angular quadrature nodes.
    #[arg(long, default_value_t = 4096)]
    pub nodes: usize,
    /// Smoothing schedule, comma separated and strictly decreasing.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3, 1e-4])]
    pub delta: Vec<f64>,
    /// Iteration cap per smoothing level.
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    /// Vertex budget for the completed curve.
    #[arg(long, default_value_t = 1024)]
    pub n_vertices: usize,
    /// Output directory for reports and figures.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG figures.
    #[arg(long)]
    pub svg: bool,
    /// Seed for the sampling oracle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct PlateauArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Boundary polyline as `x,y` lines, used instead of a curve.
    #[arg(long, conflicts_with_all = ["curve", "builtin"])]
    pub polyline: Option<PathBuf>,
    /// Resolution of the sampling oracle for the winding area (0 disables it).
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TangentialArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Inner radius of the annulus.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RecoveryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Shrinking indices.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8, 16, 32])]
    pub ks: Vec<usize>,
    /// Mollifier indices, one per shrinking index (default: the same).
    #[arg(long, value_delimiter = ',')]
    pub mollify_ks: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Inner radius of the annulus.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Number of radii.
    #[arg(long, default_value_t = 256)]
    pub n_radii: usize,
}

/// Fully resolved settings, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub curve_source: String,
    pub radius: f64,
    pub h: f64,
    pub nodes: usize,
    pub delta_schedule: Vec<f64>,
    pub max_iters: usize,
    pub n_vertices: usize,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mollify_ks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_radii: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<usize>,
}

/// Boundary data of a run.
pub enum Input {
    Curve(Curve),
    Polyline(ClosedPolyline),
}

impl RunConfig {
    pub fn from_common(command: &'static str, a: &CommonArgs) -> Result<RunConfig, ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(a.radius.is_finite() && a.radius > 0.0) {
            return bad(format!("--radius must be positive, got {}", a.radius));
        }
        if !(a.h > 0.0 && a.h < 1.0) {
            return bad(format!("--h must lie in (0, 1), got {}", a.h));
        }
        if a.nodes < 64 || !a.nodes.is_multiple_of(2) {
            return bad(format!("--nodes must be even and at least 64, got {}", a.nodes));
        }
        if a.delta.is_empty() || a.delta.iter().any(|d| !(d.is_finite() && *d > 0.0)) || a.delta.windows(2).any(|w| w[1] >= w[0]) {
            return bad(format!("--delta must be positive and strictly decreasing, got {:?}", a.delta));
        }
        if a.n_vertices < 3 {
            return bad(format!("--n-vertices must be at least 3, got {}", a.n_vertices));
        }
        let curve_source = match (&a.curve, a.builtin) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(b)) => format!("builtin:{}", Builtin::from(b).name()),
            (None, None) => String::new(),
        };
        Ok(RunConfig {
            command,
            curve_source,
            radius: a.radius,
            h: a.h,
            nodes: a.nodes,
            delta_schedule: a.delta.clone(),
            max_iters: a.max_iters,
            n_vertices: a.n_vertices,
            out_dir: a.out.clone(),
            emit_svg: a.svg,
            seed: a.seed,
            eps: None,
            ks: None,
            mollify_ks: None,
            n_radii: None,
            grid_resolution: None,
        })
    }
}

/// Reads the curve named by `--curve` or `--builtin`.
pub fn load_curve(a: &CommonArgs) -> Result<Curve, ConfigError> {
    match (&a.curve, a.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.clone(), source })?;
            parse_curve(&text).map_err(|e| ConfigError::Curve { path: path.display().to_string(), message: e.to_string() })
        }
        (None, Some(b)) => Ok(Builtin::from(b).curve()),
        (None, None) => Err(ConfigError::Invalid("one of --curve or --builtin is required".into())),
    }
}

pub fn load_input(a: &PlateauArgs) -> Result<Input, ConfigError> {
    match &a.polyline {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.clone(), source })?;
            ClosedPolyline::from_csv(&text)
                .map(Input::Polyline)
                .map_err(|message| ConfigError::Curve { path: path.display().to_string(), message })
        }
        None => load_curve(&a.common).map(Input::Curve),
    }
}
