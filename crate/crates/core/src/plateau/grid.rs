//! Sampling estimate of `∫ |deg(poly, y)| dy`, independent of the arrangement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::winding::winding_number;
use crate::bv_curve::ClosedPolyline;
use crate::geom::{pairwise_sum, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridEstimate {
    pub value: f64,
    /// Standard error of `value` under independent sampling (conservative for
    /// the stratified scheme used here).
    pub std_error: f64,
    pub samples: usize,
}

impl GridEstimate {
    /// Whether `exact` lies within `k` standard errors, with a floor of
    /// `1e-12·max(1, |exact|)` when every sample agreed.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.value - exact).abs() <= k * self.std_error + 1e-12 * exact.abs().max(1.0)
    }
}

/// One jittered sample per cell of a `resolution × resolution` grid over the
/// bounding box. Each row draws from its own seeded stream so the result does
/// not depend on the number of worker threads.
pub fn winding_area_grid(poly: &ClosedPolyline, resolution: usize, seed: u64) -> GridEstimate {
    let (lo, hi) = poly.bbox();
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    if poly.is_degenerate() || w == 0.0 || h == 0.0 {
        return GridEstimate { value: 0.0, std_error: 0.0, samples: 0 };
    }
    let res = resolution.max(1);
    let rows: Vec<(f64, f64)> = (0..res)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let mut s = Vec::with_capacity(res);
            let mut s2 = Vec::with_capacity(res);
            for i in 0..res {
                let mut tries = 0;
                let value = loop {
                    let p = Vec2::new(
                        lo.x + (i as f64 + rng.gen::<f64>()) / res as f64 * w,
                        lo.y + (j as f64 + rng.gen::<f64>()) / res as f64 * h,
                    );
                    match winding_number(poly, p) {
                        Ok(k) => break k.unsigned_abs() as f64,
                        Err(_) if tries < 32 => tries += 1,
                        Err(_) => break 0.0,
                    }
                };
                s.push(value);
                s2.push(value * value);
            }
            (pairwise_sum(&s), pairwise_sum(&s2))
        })
        .collect();
    let n = (res * res) as f64;
    let sum = pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let sum2 = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    let area = w * h;
    GridEstimate { value: area * mean, std_error: area * (var / n).sqrt(), samples: res * res }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plateau::arrangement::winding_area;

    #[test]
    fn unit_square() {
        let sq = ClosedPolyline::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]);
        let g = winding_area_grid(&sq, 512, 7);
        assert!((g.value - 1.0).abs() < 0.01);
    }

    #[test]
    fn hexagon_matches_exact_area() {
        let hex = ClosedPolyline::regular(6, 1.0);
        let g = winding_area_grid(&hex, 512, 11);
        let exact = winding_area(&hex).unwrap();
        assert!((g.value - 2.598076211353316).abs() < 0.01);
        assert!(g.agrees_with(exact, 3.0), "{g:?} vs {exact}");
    }

    #[test]
    fn empty_curve() {
        assert_eq!(winding_area_grid(&ClosedPolyline::point(Vec2::ZERO), 64, 1).value, 0.0);
    }

    #[test]
    fn reproducible_for_a_seed() {
        let hex = ClosedPolyline::regular(6, 1.0);
        assert_eq!(winding_area_grid(&hex, 64, 3), winding_area_grid(&hex, 64, 3));
    }
}
