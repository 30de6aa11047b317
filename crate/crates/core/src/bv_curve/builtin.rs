//! Named test curves.

use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use super::{Arc, CumulativeVariation, Curve, Jump, Path, Piece};
use crate::geom::{Vec2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Constant,
    /// Identity map of the unit circle.
    Vortex,
    /// Three constant arcs at the vertices of the unit equilateral triangle.
    Triple,
    /// A quarter circle swept by a devil's staircase, closed by one jump.
    CantorArc,
    /// Two unit squares traversed with opposite orientations.
    FigureEight,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Constant,
        Builtin::Vortex,
        Builtin::Triple,
        Builtin::CantorArc,
        Builtin::FigureEight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Constant => "constant",
            Builtin::Vortex => "vortex",
            Builtin::Triple => "triple",
            Builtin::CantorArc => "cantor-arc",
            Builtin::FigureEight => "figure-eight",
        }
    }

    pub fn curve(self) -> Curve {
        let pieces = match self {
            Builtin::Constant => vec![constant_arc(0.0, TAU, Vec2::new(0.5, 0.25))],
            Builtin::Vortex => vec![Piece::Arc(Arc::new(
                0.0,
                TAU,
                Path::circle_arc(Vec2::ZERO, 1.0, 0.0, TAU),
                CumulativeVariation::linear(TAU),
                CumulativeVariation::zero(),
            ))],
            Builtin::Triple => {
                let [a, b, c] = triangle_vertices();
                let third = TAU / 3.0;
                vec![
                    Piece::Jump(Jump::new(0.0, c, a)),
                    constant_arc(0.0, third, a),
                    Piece::Jump(Jump::new(third, a, b)),
                    constant_arc(third, 2.0 * third, b),
                    Piece::Jump(Jump::new(2.0 * third, b, c)),
                    constant_arc(2.0 * third, TAU, c),
                ]
            }
            Builtin::CantorArc => {
                let start = Vec2::new(1.0, 0.0);
                let end = Vec2::new(0.0, 1.0);
                let samples = devil_staircase(7).into_iter().map(|c| c * FRAC_PI_2).collect();
                vec![
                    Piece::Jump(Jump::new(0.0, end, start)),
                    constant_arc(0.0, FRAC_PI_2, start),
                    Piece::Arc(Arc::new(
                        FRAC_PI_2,
                        1.5 * PI,
                        Path::circle_arc(Vec2::ZERO, 1.0, 0.0, FRAC_PI_2),
                        CumulativeVariation::zero(),
                        CumulativeVariation::Sampled { samples },
                    )),
                    constant_arc(1.5 * PI, TAU, end),
                ]
            }
            Builtin::FigureEight => vec![Piece::Arc(Arc::new(
                0.0,
                TAU,
                Path::polyline(figure_eight_vertices()),
                CumulativeVariation::linear(8.0),
                CumulativeVariation::zero(),
            ))],
        };
        Curve::new(pieces).expect("builtin curves are valid")
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Builtin::ALL.iter().map(|b| b.name()).collect();
                format!("unknown builtin curve {s:?}; expected one of {}", names.join(", "))
            })
    }
}

fn constant_arc(theta0: f64, theta1: f64, at: Vec2) -> Piece {
    Piece::Arc(Arc::new(theta0, theta1, Path::point(at), CumulativeVariation::zero(), CumulativeVariation::zero()))
}

/// Counterclockwise unit equilateral triangle.
pub(crate) fn triangle_vertices() -> [Vec2; 3] {
    [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 0.75f64.sqrt())]
}

/// Closed polyline around `[0,1]²` counterclockwise, then `[-1,0]²` clockwise.
pub(crate) fn figure_eight_vertices() -> Vec<Vec2> {
    [
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 1.0),
        (0.0, 1.0),
        (0.0, 0.0),
        (0.0, -1.0),
        (-1.0, -1.0),
        (-1.0, 0.0),
        (0.0, 0.0),
    ]
    .into_iter()
    .map(|(x, y)| Vec2::new(x, y))
    .collect()
}

/// Cantor function at the grid `i / 3^level`, `i = 0..=3^level`.
fn devil_staircase(level: u32) -> Vec<f64> {
    let n = 3usize.pow(level);
    (0..=n)
        .map(|i| {
            if i == n {
                return 1.0;
            }
            // ternary digits of i, most significant first
            let mut value = 0.0;
            let mut weight = 0.5;
            let mut rest = i;
            let mut place = n / 3;
            for _ in 0..level {
                let digit = rest / place;
                rest %= place;
                match digit {
                    1 => return value + weight,
                    2 => value += weight,
                    _ => {}
                }
                weight *= 0.5;
                place = (place / 3).max(1);
            }
            value
        })
        .collect()
}
