//! Boundary data `γ ∈ BV(S¹; ℝ²)` with an explicit split of the derivative
//! into absolutely continuous, jump and Cantor parts.
//!
//! A [`Curve`] is a circular list of [`Arc`]s and [`Jump`]s. Each arc walks
//! once along a unit-speed geometric [`Path`]; how fast it walks is described
//! by two monotone cumulative profiles, one for the absolutely continuous
//! mass and one for the singular continuous (Cantor) mass. Jumps sit at arc
//! boundaries and carry the two one-sided traces.

mod builtin;
mod completed;
mod mollify;
mod reparam;
mod spec_file;

use thiserror::Error;

use crate::geom::{normalize_angle, Vec2, TAU};

pub use builtin::Builtin;
pub use completed::{completed_curve, ClosedPolyline};
pub use mollify::{mollify_sequence, MollifiedCurve, Window};
pub use reparam::{reparam_profile, JumpInterval, ReparamProfile};
pub use spec_file::{parse_curve, ArcSpec, CumulativeSpec, CurveSpec, PathSpec, PieceSpec};

/// Angular tolerance used when matching piece boundaries.
pub const ANGLE_TOL: f64 = 1e-9;
/// Relative tolerance for trace continuity and mass/length agreement.
pub const TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve has no pieces")]
    Empty,
    #[error("curve has no arcs; angle intervals must tile the circle")]
    NoArc,
    #[error("piece {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("piece {index}: trace discontinuity of size {gap:e} without a declared jump")]
    TraceDiscontinuity { index: usize, gap: f64 },
    #[error("piece {index}: angle interval overlaps the previous piece by {overlap:e}")]
    OverlappingIntervals { index: usize, overlap: f64 },
    #[error("piece {index}: angular gap of {gap:e} before this piece")]
    AngularGap { index: usize, gap: f64 },
    #[error("piece {index}: zero-length jump (omit it instead)")]
    ZeroJump { index: usize },
    #[error("piece {index}: two jumps at the same boundary")]
    ConsecutiveJumps { index: usize },
    #[error("piece {index}: cumulative samples decrease at sample {sample}")]
    NonmonotoneCumulative { index: usize, sample: usize },
    #[error("piece {index}: invalid cumulative profile: {reason}")]
    BadCumulative { index: usize, reason: String },
    #[error("piece {index}: ac + cantor mass {mass} does not match path length {length}")]
    LengthMismatch { index: usize, length: f64, mass: f64 },
    #[error("piece {index}: invalid path: {reason}")]
    InvalidPath { index: usize, reason: String },
    #[error("curve spec: {0}")]
    Parse(String),
}

/// One-sided trace selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Unit-speed geometric trace of an arc.
#[derive(Debug, Clone, PartialEq)]
pub enum Path {
    Point(Vec2),
    Polyline { points: Vec<Vec2>, cumlen: Vec<f64> },
    CircleArc { center: Vec2, radius: f64, phi0: f64, phi1: f64 },
}

impl Path {
    pub fn point(at: Vec2) -> Self {
        Path::Point(at)
    }

    pub fn polyline(points: Vec<Vec2>) -> Self {
        let mut cumlen = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                acc += p.dist(points[i - 1]);
            }
            cumlen.push(acc);
        }
        Path::Polyline { points, cumlen }
    }

    pub fn circle_arc(center: Vec2, radius: f64, phi0: f64, phi1: f64) -> Self {
        Path::CircleArc { center, radius, phi0, phi1 }
    }

    pub fn length(&self) -> f64 {
        match self {
            Path::Point(_) => 0.0,
            Path::Polyline { cumlen, .. } => cumlen.last().copied().unwrap_or(0.0),
            Path::CircleArc { radius, phi0, phi1, .. } => radius * (phi1 - phi0).abs(),
        }
    }

    pub fn start(&self) -> Vec2 {
        self.at_fraction(0.0)
    }

    pub fn end(&self) -> Vec2 {
        self.at_fraction(1.0)
    }

    /// Point at arclength `f · length` from the start, `f ∈ [0, 1]`.
    pub fn at_fraction(&self, f: f64) -> Vec2 {
        let f = f.clamp(0.0, 1.0);
        match self {
            Path::Point(p) => *p,
            Path::Polyline { points, cumlen } => {
                let total = *cumlen.last().unwrap();
                if total == 0.0 || f == 0.0 {
                    return points[0];
                }
                if f == 1.0 {
                    return *points.last().unwrap();
                }
                let s = f * total;
                let i = cumlen.partition_point(|&c| c <= s).clamp(1, points.len() - 1);
                let seg = cumlen[i] - cumlen[i - 1];
                let t = if seg > 0.0 { (s - cumlen[i - 1]) / seg } else { 0.0 };
                points[i - 1].lerp(points[i], t)
            }
            Path::CircleArc { center, radius, phi0, phi1 } => {
                if f == 1.0 {
                    return *center + Vec2::from_angle(*phi1) * *radius;
                }
                *center + Vec2::from_angle(phi0 + f * (phi1 - phi0)) * *radius
            }
        }
    }

    /// Vertices of a polyline tracing the path. Circle arcs are split into
    /// `segments` equal chords; polylines keep their own corners.
    pub fn trace(&self, segments: usize) -> Vec<Vec2> {
        match self {
            Path::Point(p) => vec![*p],
            Path::Polyline { points, .. } => points.clone(),
            Path::CircleArc { .. } => {
                let m = segments.max(1);
                (0..=m).map(|i| self.at_fraction(i as f64 / m as f64)).collect()
            }
        }
    }
}

/// Monotone cumulative variation of one arc, parametrized by the fraction
/// `u ∈ [0, 1]` of the arc's angle interval.
#[derive(Debug, Clone, PartialEq)]
pub enum CumulativeVariation {
    Linear { total: f64 },
    /// Values on a uniform grid over `[0, 1]`, interpolated linearly.
    Sampled { samples: Vec<f64> },
}

impl CumulativeVariation {
    pub fn zero() -> Self {
        CumulativeVariation::Linear { total: 0.0 }
    }

    pub fn linear(total: f64) -> Self {
        CumulativeVariation::Linear { total }
    }

    pub fn total(&self) -> f64 {
        match self {
            CumulativeVariation::Linear { total } => *total,
            CumulativeVariation::Sampled { samples } => *samples.last().unwrap(),
        }
    }

    /// Number of cells on which the profile is affine.
    pub fn cells(&self) -> usize {
        match self {
            CumulativeVariation::Linear { .. } => 1,
            CumulativeVariation::Sampled { samples } => samples.len() - 1,
        }
    }

    /// Profile value at fraction `u`.
    pub fn at(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            CumulativeVariation::Linear { total } => {
                if u == 1.0 {
                    *total
                } else {
                    total * u
                }
            }
            CumulativeVariation::Sampled { samples } => {
                let n = samples.len() - 1;
                if u == 1.0 {
                    return samples[n];
                }
                let x = u * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let t = x - i as f64;
                samples[i] + t * (samples[i + 1] - samples[i])
            }
        }
    }

    /// `(u0, u1, increment)` for every affine cell.
    pub fn cell_increments(&self) -> Vec<(f64, f64, f64)> {
        match self {
            CumulativeVariation::Linear { total } => vec![(0.0, 1.0, *total)],
            CumulativeVariation::Sampled { samples } => {
                let n = (samples.len() - 1) as f64;
                samples
                    .windows(2)
                    .enumerate()
                    .map(|(i, w)| (i as f64 / n, (i + 1) as f64 / n, w[1] - w[0]))
                    .collect()
            }
        }
    }

    /// Piecewise-linear interpolant on `cells` uniform subintervals. Returns
    /// the profile unchanged when it is already at least that fine.
    pub fn interpolant(&self, cells: usize) -> CumulativeVariation {
        match self {
            CumulativeVariation::Linear { .. } => self.clone(),
            CumulativeVariation::Sampled { samples } if cells >= samples.len() - 1 => self.clone(),
            CumulativeVariation::Sampled { samples } => {
                let n = cells.max(1);
                let mut out: Vec<f64> = (0..=n).map(|i| self.at(i as f64 / n as f64)).collect();
                out[0] = samples[0];
                out[n] = *samples.last().unwrap();
                CumulativeVariation::Sampled { samples: out }
            }
        }
    }

    fn check(&self, index: usize) -> Result<(), CurveError> {
        match self {
            CumulativeVariation::Linear { total } => {
                if !total.is_finite() {
                    return Err(CurveError::NonFinite { index });
                }
                if *total < 0.0 {
                    return Err(CurveError::BadCumulative { index, reason: "negative total".into() });
                }
            }
            CumulativeVariation::Sampled { samples } => {
                if samples.len() < 2 {
                    return Err(CurveError::BadCumulative { index, reason: "fewer than two samples".into() });
                }
                if samples.iter().any(|s| !s.is_finite()) {
                    return Err(CurveError::NonFinite { index });
                }
                if samples[0] != 0.0 {
                    return Err(CurveError::BadCumulative { index, reason: "samples must start at 0".into() });
                }
                if let Some(i) = samples.windows(2).position(|w| w[1] < w[0]) {
                    return Err(CurveError::NonmonotoneCumulative { index, sample: i + 1 });
                }
            }
        }
        Ok(())
    }
}

/// Restriction of `γ` to a continuity interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub theta0: f64,
    /// Angular length in `(0, 2π]`.
    pub span: f64,
    pub path: Path,
    pub ac: CumulativeVariation,
    pub cantor: CumulativeVariation,
}

impl Arc {
    /// Arc over `[theta0, theta1)`; `theta1 ≤ theta0` wraps through 0, and
    /// equal angles mean the whole circle.
    pub fn new(theta0: f64, theta1: f64, path: Path, ac: CumulativeVariation, cantor: CumulativeVariation) -> Self {
        let mut span = (theta1 - theta0).rem_euclid(TAU);
        if span == 0.0 {
            span = TAU;
        }
        Arc { theta0: normalize_angle(theta0), span, path, ac, cantor }
    }

    pub fn theta1(&self) -> f64 {
        normalize_angle(self.theta0 + self.span)
    }

    /// Variation carried by the arc.
    pub fn mass(&self) -> f64 {
        self.ac.total() + self.cantor.total()
    }

    pub fn start_point(&self) -> Vec2 {
        self.path.start()
    }

    pub fn end_point(&self) -> Vec2 {
        self.path.end()
    }

    /// Cumulative variation from the arc start to angular offset `local`,
    /// using `cantor` in place of the arc's own Cantor profile.
    pub(crate) fn mass_to(&self, local: f64, cantor: &CumulativeVariation) -> f64 {
        let u = (local / self.span).clamp(0.0, 1.0);
        self.ac.at(u) + cantor.at(u)
    }

    pub(crate) fn point_at_with(&self, local: f64, cantor: &CumulativeVariation) -> Vec2 {
        let mass = self.ac.total() + cantor.total();
        if mass == 0.0 {
            return self.path.start();
        }
        self.path.at_fraction(self.mass_to(local, cantor) / mass)
    }

    /// Trace value at angular offset `local ∈ [0, span]` from `theta0`.
    pub fn point_at(&self, local: f64) -> Vec2 {
        self.point_at_with(local, &self.cantor)
    }

    fn is_constant(&self) -> bool {
        self.mass() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub theta: f64,
    pub left: Vec2,
    pub right: Vec2,
}

impl Jump {
    pub fn new(theta: f64, left: Vec2, right: Vec2) -> Self {
        Jump { theta: normalize_angle(theta), left, right }
    }

    pub fn size(&self) -> f64 {
        self.left.dist(self.right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Arc(Arc),
    Jump(Jump),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct VariationDecomposition {
    pub ac_mass: f64,
    pub jump_mass: f64,
    pub cantor_mass: f64,
    pub total: f64,
}

/// A validated BV curve on the circle. Only [`Curve::new`] builds one.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pieces: Vec<Piece>,
    /// Arcs in circular order starting from the first arc in `pieces`.
    arcs: Vec<Arc>,
    /// Offset of each arc start from `arcs[0].theta0`.
    arc_offsets: Vec<f64>,
    jumps: Vec<Jump>,
}

impl Curve {
    /// Validates the pieces and normalizes angles to `[0, 2π)`.
    pub fn new(pieces: Vec<Piece>) -> Result<Curve, CurveError> {
        validate(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// No jumps and no Cantor mass, i.e. `γ` is Lipschitz.
    pub fn is_lipschitz(&self) -> bool {
        self.jumps.is_empty() && self.arcs.iter().all(|a| a.cantor.total() == 0.0)
    }

    pub fn total_variation(&self) -> VariationDecomposition {
        total_variation(self)
    }

    pub fn evaluate(&self, theta: f64, side: Side) -> Vec2 {
        evaluate(self, theta, side)
    }

    /// Locate the arc containing `theta` and the offset within it.
    pub(crate) fn locate(&self, theta: f64, side: Side) -> (usize, f64) {
        let t = (theta - self.arcs[0].theta0).rem_euclid(TAU);
        let t = if t >= TAU { 0.0 } else { t };
        let n = self.arcs.len();
        match side {
            Side::Right => {
                let i = self.arc_offsets.partition_point(|&s| s <= t).max(1) - 1;
                (i, (t - self.arc_offsets[i]).min(self.arcs[i].span))
            }
            Side::Left => {
                if t == 0.0 {
                    return (n - 1, self.arcs[n - 1].span);
                }
                let i = self.arc_offsets.partition_point(|&s| s < t).max(1) - 1;
                (i, (t - self.arc_offsets[i]).min(self.arcs[i].span))
            }
        }
    }

    /// Angular mean `(1/2π) ∫ γ dθ`, by midpoint quadrature with `nodes` points.
    pub fn angular_mean(&self, nodes: usize) -> Vec2 {
        let n = nodes.max(1);
        let d = TAU / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| self.evaluate((i as f64 + 0.5) * d, Side::Right).x).collect();
        let ys: Vec<f64> = (0..n).map(|i| self.evaluate((i as f64 + 0.5) * d, Side::Right).y).collect();
        Vec2::new(crate::geom::pairwise_sum(&xs) / n as f64, crate::geom::pairwise_sum(&ys) / n as f64)
    }

    /// Angles where the curve changes piece (arc starts), sorted in `[0, 2π)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.arcs.iter().map(|a| a.theta0).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

fn close(a: Vec2, b: Vec2) -> bool {
    a.dist(b) <= TRACE_TOL * 1f64.max(a.norm()).max(b.norm())
}

/// Signed angular difference `b − a` folded into `(−π, π]`.
fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// Checks every structural invariant of a curve.
pub fn validate(pieces: Vec<Piece>) -> Result<Curve, CurveError> {
    if pieces.is_empty() {
        return Err(CurveError::Empty);
    }
    let mut pieces = pieces;
    for (index, p) in pieces.iter_mut().enumerate() {
        match p {
            Piece::Arc(a) => {
                if !a.theta0.is_finite() || !a.span.is_finite() {
                    return Err(CurveError::NonFinite { index });
                }
                a.theta0 = normalize_angle(a.theta0);
                check_path(&a.path, index)?;
                a.ac.check(index)?;
                a.cantor.check(index)?;
                let length = a.path.length();
                let mass = a.mass();
                if (length - mass).abs() > TRACE_TOL * length.max(1.0) {
                    return Err(CurveError::LengthMismatch { index, length, mass });
                }
            }
            Piece::Jump(j) => {
                if !j.theta.is_finite() || !j.left.is_finite() || !j.right.is_finite() {
                    return Err(CurveError::NonFinite { index });
                }
                j.theta = normalize_angle(j.theta);
                if j.left == j.right {
                    return Err(CurveError::ZeroJump { index });
                }
            }
        }
    }
    let first_arc = pieces
        .iter()
        .position(|p| matches!(p, Piece::Arc(_)))
        .ok_or(CurveError::NoArc)?;

    // walk the circle starting at the first arc
    let n = pieces.len();
    let start = match &pieces[first_arc] {
        Piece::Arc(a) => a.theta0,
        Piece::Jump(_) => unreachable!(),
    };
    let mut cursor: f64 = 0.0; // unwrapped offset from `start`
    let mut arcs = Vec::new();
    let mut arc_offsets = Vec::new();
    let mut jumps = Vec::new();
    let mut prev_is_jump = false;
    let mut last_point: Option<Vec2> = None;
    for step in 0..n {
        let index = (first_arc + step) % n;
        match &pieces[index] {
            Piece::Arc(a) => {
                let offset = (a.theta0 - start).rem_euclid(TAU);
                let expected = cursor.rem_euclid(TAU);
                let d = angle_diff(expected, offset);
                if d > ANGLE_TOL {
                    return Err(CurveError::AngularGap { index, gap: d });
                }
                if d < -ANGLE_TOL {
                    return Err(CurveError::OverlappingIntervals { index, overlap: -d });
                }
                if let Some(prev) = last_point {
                    if !close(prev, a.start_point()) {
                        return Err(CurveError::TraceDiscontinuity { index, gap: prev.dist(a.start_point()) });
                    }
                }
                arc_offsets.push(cursor);
                cursor += a.span;
                if cursor > TAU + ANGLE_TOL {
                    return Err(CurveError::OverlappingIntervals { index, overlap: cursor - TAU });
                }
                last_point = Some(a.end_point());
                arcs.push(a.clone());
                prev_is_jump = false;
            }
            Piece::Jump(j) => {
                if prev_is_jump {
                    return Err(CurveError::ConsecutiveJumps { index });
                }
                let offset = (j.theta - start).rem_euclid(TAU);
                let d = angle_diff(cursor.rem_euclid(TAU), offset);
                if d > ANGLE_TOL {
                    return Err(CurveError::AngularGap { index, gap: d });
                }
                if d < -ANGLE_TOL {
                    return Err(CurveError::OverlappingIntervals { index, overlap: -d });
                }
                let prev = last_point.expect("walk starts at an arc");
                if !close(prev, j.left) {
                    return Err(CurveError::TraceDiscontinuity { index, gap: prev.dist(j.left) });
                }
                last_point = Some(j.right);
                jumps.push(*j);
                prev_is_jump = true;
            }
        }
    }
    if (cursor - TAU).abs() > ANGLE_TOL {
        return Err(CurveError::AngularGap { index: first_arc, gap: TAU - cursor });
    }
    let closing = last_point.unwrap();
    if !close(closing, arcs[0].start_point()) {
        return Err(CurveError::TraceDiscontinuity { index: first_arc, gap: closing.dist(arcs[0].start_point()) });
    }
    // start angles increase around the list, wrapping at most once
    let starts: Vec<f64> = pieces
        .iter()
        .map(|p| match p {
            Piece::Arc(a) => a.theta0,
            Piece::Jump(j) => j.theta,
        })
        .collect();
    let descents = starts.windows(2).filter(|w| w[1] < w[0] - ANGLE_TOL).count();
    if descents > 1 {
        let index = starts.windows(2).rposition(|w| w[1] < w[0] - ANGLE_TOL).unwrap() + 1;
        return Err(CurveError::OverlappingIntervals { index, overlap: 0.0 });
    }
    Ok(Curve { pieces, arcs, arc_offsets, jumps })
}

fn check_path(path: &Path, index: usize) -> Result<(), CurveError> {
    match path {
        Path::Point(p) if !p.is_finite() => Err(CurveError::NonFinite { index }),
        Path::Polyline { points, .. } => {
            if points.is_empty() {
                return Err(CurveError::InvalidPath { index, reason: "empty polyline".into() });
            }
            if points.iter().any(|p| !p.is_finite()) {
                return Err(CurveError::NonFinite { index });
            }
            Ok(())
        }
        Path::CircleArc { center, radius, phi0, phi1 } => {
            if !center.is_finite() || !radius.is_finite() || !phi0.is_finite() || !phi1.is_finite() {
                return Err(CurveError::NonFinite { index });
            }
            if *radius <= 0.0 {
                return Err(CurveError::InvalidPath { index, reason: "radius must be positive".into() });
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Masses of the three parts of `|γ̇|`; `total` is their sum.
pub fn total_variation(curve: &Curve) -> VariationDecomposition {
    let ac_mass: f64 = curve.arcs.iter().map(|a| a.ac.total()).sum();
    let cantor_mass: f64 = curve.arcs.iter().map(|a| a.cantor.total()).sum();
    let jump_mass: f64 = curve.jumps.iter().map(Jump::size).fold(0.0, |a, b| a + b);
    VariationDecomposition { ac_mass, jump_mass, cantor_mass, total: ac_mass + jump_mass + cantor_mass }
}

/// One-sided trace `γ^±(θ)`.
pub fn evaluate(curve: &Curve, theta: f64, side: Side) -> Vec2 {
    let (i, local) = curve.locate(theta, side);
    let arc = &curve.arcs[i];
    if arc.is_constant() {
        return arc.start_point();
    }
    arc.point_at(local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn vortex() -> Curve {
        Builtin::Vortex.curve()
    }

    fn triple() -> Curve {
        Builtin::Triple.curve()
    }

    #[test]
    fn constant_curve_is_valid_and_has_no_variation() {
        let c = Curve::new(vec![Piece::Arc(Arc::new(
            0.0,
            TAU,
            Path::point(Vec2::new(0.5, 0.25)),
            CumulativeVariation::zero(),
            CumulativeVariation::zero(),
        ))])
        .unwrap();
        let tv = c.total_variation();
        assert_eq!((tv.ac_mass, tv.jump_mass, tv.cantor_mass, tv.total), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(c.evaluate(1.0, Side::Left), Vec2::new(0.5, 0.25));
    }

    #[test]
    fn gap_between_arcs_without_jump_is_rejected() {
        let a = Arc::new(0.0, PI, Path::point(Vec2::new(0.0, 0.0)), CumulativeVariation::zero(), CumulativeVariation::zero());
        let b = Arc::new(PI, TAU, Path::point(Vec2::new(0.5, 0.0)), CumulativeVariation::zero(), CumulativeVariation::zero());
        let err = Curve::new(vec![Piece::Arc(a), Piece::Arc(b)]).unwrap_err();
        assert!(matches!(err, CurveError::TraceDiscontinuity { gap, .. } if (gap - 0.5).abs() < 1e-15), "{err:?}");
    }

    #[test]
    fn triple_point_is_valid_with_three_unit_jumps() {
        let c = triple();
        assert_eq!(c.jumps().len(), 3);
        let tv = c.total_variation();
        assert_eq!(tv.ac_mass, 0.0);
        assert_eq!(tv.cantor_mass, 0.0);
        assert!((tv.jump_mass - 3.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_and_gapped_intervals() {
        let p = Path::point(Vec2::ZERO);
        let z = CumulativeVariation::zero;
        let over = vec![Piece::Arc(Arc::new(0.0, 4.0, p.clone(), z(), z())), Piece::Arc(Arc::new(3.0, 0.0, p.clone(), z(), z()))];
        assert!(matches!(Curve::new(over).unwrap_err(), CurveError::OverlappingIntervals { .. }));
        let gap = vec![Piece::Arc(Arc::new(0.0, 3.0, p.clone(), z(), z())), Piece::Arc(Arc::new(3.5, 0.0, p, z(), z()))];
        assert!(matches!(Curve::new(gap).unwrap_err(), CurveError::AngularGap { .. }));
    }

    #[test]
    fn zero_jump_and_nonmonotone_samples_are_rejected() {
        let p = Path::point(Vec2::ZERO);
        let z = CumulativeVariation::zero;
        let pieces = vec![Piece::Jump(Jump::new(0.0, Vec2::ZERO, Vec2::ZERO)), Piece::Arc(Arc::new(0.0, TAU, p, z(), z()))];
        assert!(matches!(Curve::new(pieces).unwrap_err(), CurveError::ZeroJump { index: 0 }));

        let path = Path::polyline(vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::ZERO]);
        let bad = CumulativeVariation::Sampled { samples: vec![0.0, 1.5, 1.4, 2.0] };
        let pieces = vec![Piece::Arc(Arc::new(0.0, TAU, path, bad, z()))];
        assert!(matches!(Curve::new(pieces).unwrap_err(), CurveError::NonmonotoneCumulative { sample: 2, .. }));
    }

    #[test]
    fn mass_must_match_path_length() {
        let path = Path::circle_arc(Vec2::ZERO, 1.0, 0.0, TAU);
        let pieces = vec![Piece::Arc(Arc::new(0.0, TAU, path, CumulativeVariation::linear(6.0), CumulativeVariation::zero()))];
        assert!(matches!(Curve::new(pieces).unwrap_err(), CurveError::LengthMismatch { .. }));
    }

    #[test]
    fn vortex_variation_and_evaluation() {
        let c = vortex();
        let tv = c.total_variation();
        assert!((tv.ac_mass - TAU).abs() < 1e-15);
        assert_eq!(tv.total, tv.ac_mass);
        for side in [Side::Left, Side::Right] {
            let p = c.evaluate(FRAC_PI_2, side);
            assert!((p - Vec2::new(0.0, 1.0)).norm() < 1e-15);
        }
        // wrap point
        assert!((c.evaluate(0.0, Side::Left) - Vec2::new(1.0, 0.0)).norm() < 1e-12);
        assert!((c.evaluate(0.0, Side::Right) - Vec2::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn triple_point_one_sided_traces_at_jumps() {
        let c = triple();
        for j in c.jumps() {
            assert_eq!(c.evaluate(j.theta, Side::Left), j.left);
            assert_eq!(c.evaluate(j.theta, Side::Right), j.right);
        }
    }

    #[test]
    fn cantor_arc_midpoint_at_half_mass() {
        let c = Builtin::CantorArc.curve();
        let arc = c.arcs().iter().find(|a| a.cantor.total() > 0.0).unwrap();
        assert_eq!(c.total_variation().cantor_mass, FRAC_PI_2);
        // the devil's staircase reaches half its mass at the middle of the interval
        let theta = arc.theta0 + arc.span / 2.0;
        let expected = Vec2::from_angle(PI / 4.0);
        for side in [Side::Left, Side::Right] {
            assert!((c.evaluate(theta, side) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn total_variation_is_invariant_under_origin_rotation_and_rigid_motion() {
        let c = Builtin::FigureEight.curve();
        let shift = 1.234;
        let rot = |p: Vec2| Vec2::new(0.6 * p.x - 0.8 * p.y + 3.0, 0.8 * p.x + 0.6 * p.y - 1.0);
        let moved: Vec<Piece> = c
            .pieces()
            .iter()
            .map(|p| match p {
                Piece::Arc(a) => {
                    let path = match &a.path {
                        Path::Polyline { points, .. } => Path::polyline(points.iter().copied().map(rot).collect()),
                        other => other.clone(),
                    };
                    Piece::Arc(Arc { theta0: a.theta0 + shift, span: a.span, path, ac: a.ac.clone(), cantor: a.cantor.clone() })
                }
                Piece::Jump(j) => Piece::Jump(Jump::new(j.theta + shift, rot(j.left), rot(j.right))),
            })
            .collect();
        let d = Curve::new(moved).unwrap();
        let (a, b) = (c.total_variation(), d.total_variation());
        assert!((a.total - b.total).abs() < 1e-12);
    }

    #[test]
    fn interpolant_preserves_endpoints_and_monotonicity() {
        let cv = CumulativeVariation::Sampled { samples: vec![0.0, 0.1, 0.1, 0.5, 0.9, 1.0, 1.0, 1.0, 2.0] };
        let coarse = cv.interpolant(3);
        assert_eq!(coarse.total(), 2.0);
        assert_eq!(coarse.at(0.0), 0.0);
        if let CumulativeVariation::Sampled { samples } = &coarse {
            assert_eq!(samples.len(), 4);
            assert!(samples.windows(2).all(|w| w[1] >= w[0]));
        }
        assert_eq!(cv.interpolant(64), cv);
    }
}
