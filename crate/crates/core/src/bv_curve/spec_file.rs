//! JSON curve-spec files.
//!
//! ```json
//! {"pieces": [
//!   {"type": "arc", "theta0": 0, "theta1": 6.283185307179586,
//!    "path": {"kind": "circle_arc", "center": [0, 0], "radius": 1, "phi0": 0, "phi1": 6.283185307179586},
//!    "ac": {"kind": "linear", "total": 6.283185307179586},
//!    "cantor": {"kind": "linear", "total": 0}}
//! ]}
//! ```

use serde::{Deserialize, Serialize};

use super::{Arc, CumulativeVariation, Curve, CurveError, Jump, Path, Piece};
use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceSpec {
    Arc(ArcSpec),
    Jump { theta: f64, left: Vec2, right: Vec2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub theta0: f64,
    pub theta1: f64,
    pub path: PathSpec,
    pub ac: CumulativeSpec,
    pub cantor: CumulativeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSpec {
    Polyline { points: Vec<Vec2> },
    CircleArc { center: Vec2, radius: f64, phi0: f64, phi1: f64 },
    Point { at: Vec2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CumulativeSpec {
    Linear { total: f64 },
    Sampled { samples: Vec<f64> },
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<CurveSpec, CurveError> {
        serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve spec serializes")
    }

    pub fn into_curve(self) -> Result<Curve, CurveError> {
        Curve::new(self.pieces.into_iter().map(PieceSpec::into_piece).collect())
    }

    pub fn from_curve(curve: &Curve) -> CurveSpec {
        let pieces = curve
            .pieces()
            .iter()
            .map(|p| match p {
                Piece::Arc(a) => PieceSpec::Arc(ArcSpec {
                    theta0: a.theta0,
                    theta1: a.theta0 + a.span,
                    path: match &a.path {
                        Path::Point(p) => PathSpec::Point { at: *p },
                        Path::Polyline { points, .. } => PathSpec::Polyline { points: points.clone() },
                        Path::CircleArc { center, radius, phi0, phi1 } => {
                            PathSpec::CircleArc { center: *center, radius: *radius, phi0: *phi0, phi1: *phi1 }
                        }
                    },
                    ac: cumulative_spec(&a.ac),
                    cantor: cumulative_spec(&a.cantor),
                }),
                Piece::Jump(j) => PieceSpec::Jump { theta: j.theta, left: j.left, right: j.right },
            })
            .collect();
        CurveSpec { pieces }
    }
}

fn cumulative_spec(c: &CumulativeVariation) -> CumulativeSpec {
    match c {
        CumulativeVariation::Linear { total } => CumulativeSpec::Linear { total: *total },
        CumulativeVariation::Sampled { samples } => CumulativeSpec::Sampled { samples: samples.clone() },
    }
}

impl PieceSpec {
    fn into_piece(self) -> Piece {
        match self {
            PieceSpec::Arc(a) => {
                let path = match a.path {
                    PathSpec::Point { at } => Path::point(at),
                    PathSpec::Polyline { points } => Path::polyline(points),
                    PathSpec::CircleArc { center, radius, phi0, phi1 } => Path::circle_arc(center, radius, phi0, phi1),
                };
                Piece::Arc(Arc::new(a.theta0, a.theta1, path, a.ac.into(), a.cantor.into()))
            }
            PieceSpec::Jump { theta, left, right } => Piece::Jump(Jump::new(theta, left, right)),
        }
    }
}

impl From<CumulativeSpec> for CumulativeVariation {
    fn from(c: CumulativeSpec) -> Self {
        match c {
            CumulativeSpec::Linear { total } => CumulativeVariation::Linear { total },
            CumulativeSpec::Sampled { samples } => CumulativeVariation::Sampled { samples },
        }
    }
}

/// Parses and validates a curve-spec document.
pub fn parse_curve(text: &str) -> Result<Curve, CurveError> {
    CurveSpec::from_json(text)?.into_curve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_curve::Builtin;

    #[test]
    fn builtins_survive_a_json_round_trip() {
        for b in Builtin::ALL {
            let c = b.curve();
            let text = CurveSpec::from_curve(&c).to_json();
            let back = parse_curve(&text).unwrap();
            assert_eq!(back.total_variation(), c.total_variation(), "{}", b.name());
        }
    }

    #[test]
    fn triple_point_document() {
        let text = r#"{"pieces": [
            {"type": "jump", "theta": 0, "left": [0.5, 0.8660254037844386], "right": [0, 0]},
            {"type": "arc", "theta0": 0, "theta1": 2.0943951023931957, "path": {"kind": "point", "at": [0, 0]},
             "ac": {"kind": "linear", "total": 0}, "cantor": {"kind": "linear", "total": 0}},
            {"type": "jump", "theta": 2.0943951023931957, "left": [0, 0], "right": [1, 0]},
            {"type": "arc", "theta0": 2.0943951023931957, "theta1": 4.1887902047863905, "path": {"kind": "point", "at": [1, 0]},
             "ac": {"kind": "linear", "total": 0}, "cantor": {"kind": "linear", "total": 0}},
            {"type": "jump", "theta": 4.1887902047863905, "left": [1, 0], "right": [0.5, 0.8660254037844386]},
            {"type": "arc", "theta0": 4.1887902047863905, "theta1": 6.283185307179586, "path": {"kind": "point", "at": [0.5, 0.8660254037844386]},
             "ac": {"kind": "linear", "total": 0}, "cantor": {"kind": "linear", "total": 0}}
        ]}"#;
        let c = parse_curve(text).unwrap();
        let tv = c.total_variation();
        assert!((tv.total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn schema_violations_carry_position() {
        let err = parse_curve(r#"{"pieces": [{"type": "arc", "theta0": 0}]}"#).unwrap_err();
        match err {
            CurveError::Parse(msg) => assert!(msg.contains("line 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_curve(r#"{"pieces": [], "extra": 1}"#), Err(CurveError::Parse(_))));
        assert!(matches!(parse_curve(r#"{"pieces": []}"#), Err(CurveError::Empty)));
    }
}
