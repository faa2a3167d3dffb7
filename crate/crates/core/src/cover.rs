//! The covering curve: offset arcs of `S_t` joined by straight segments into
//! one closed trace, with its length bound and the refined Hartman bound.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::offset::{Interval, ParallelSet};
use crate::trace::{Piece, Trace};
use crate::vec2::{point_segment_distance, Vec2};

/// Relative slack on the length bounds, in units of `L`.
pub const LENGTH_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct CoverCurve {
    pub t: f64,
    pub intervals: Vec<Interval>,
    /// `(p_k, q_k)` per interval.
    pub endpoints: Vec<(Vec2, Vec2)>,
    /// Alternates arc `k`, segment `q_k -> p_{k+1}`; a single full-period arc
    /// has no segment.
    pub trace: Trace,
    pub length: f64,
    pub symmetric: bool,
}

impl CoverCurve {
    /// The joining segments `I_k` as `(k, from, to)`.
    pub fn segments(&self) -> impl Iterator<Item = (usize, Vec2, Vec2)> + '_ {
        self.trace
            .pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Segment { from, to } => Some((*from, *to)),
                Piece::Arc(_) => None,
            })
            .enumerate()
            .map(|(k, (from, to))| (k, from, to))
    }

    pub fn segment_mut(&mut self, k: usize) -> Option<(&mut Vec2, &mut Vec2)> {
        self.trace
            .pieces
            .iter_mut()
            .filter_map(|p| match p {
                Piece::Segment { from, to } => Some((from, to)),
                Piece::Arc(_) => None,
            })
            .nth(k)
    }
}

/// Joins the arcs of a regular, non-empty parallel set in cyclic order.
pub fn build_cover(ps: &ParallelSet, curve: &SampledCurve) -> Result<CoverCurve> {
    if ps.empty {
        return Err(Error::EmptyParallelSet(ps.t));
    }
    if !ps.regular {
        return Err(Error::IrregularLevel(ps.t));
    }
    let m = ps.arcs.len();
    let mut pieces = Vec::with_capacity(2 * m);
    for k in 0..m {
        pieces.push(Piece::Arc(ps.arcs[k].clone()));
        if !ps.is_full_period() {
            pieces.push(Piece::Segment {
                from: ps.endpoints[k].1,
                to: ps.endpoints[(k + 1) % m].0,
            });
        }
    }
    let trace = Trace::new(pieces);
    let h = curve.spacing();
    let join = 5.0 * h;
    let symmetric = curve.is_centrally_symmetric(10.0 * h) && trace.is_centrally_symmetric(h, join);
    Ok(CoverCurve {
        t: ps.t,
        intervals: ps.intervals.clone(),
        endpoints: ps.endpoints.clone(),
        length: trace.length(),
        trace,
        symmetric,
    })
}

/// One gap `[b_k, a_{k+1}]` of the active set and its segment.
#[derive(Debug, Clone, Serialize)]
pub struct GapCheck {
    pub index: usize,
    pub segment_length: f64,
    /// `a_{k+1} - b_k`.
    pub gap_length: f64,
    /// `int_{b_k}^{a_{k+1}} kappa ds`.
    pub curvature_integral: f64,
    /// `gap_length - t curvature_integral`.
    pub budget: f64,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverBoundReport {
    pub t: f64,
    pub gaps: Vec<GapCheck>,
    pub cover_length: f64,
    /// `L - 2 pi t`.
    pub bound: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks `|I_k| <= (a_{k+1} - b_k) - t int kappa` per gap and the global
/// bound `length <= L - 2 pi t`. Failures are reported, not raised.
pub fn verify_cover_bound(cc: &CoverCurve, curve: &SampledCurve) -> CoverBoundReport {
    let l = curve.length;
    let t = cc.t;
    let tolerance = LENGTH_TOLERANCE * l;
    let m = cc.intervals.len();
    let gaps: Vec<GapCheck> = cc
        .segments()
        .map(|(k, from, to)| {
            let end = cc.intervals[k].b;
            let mut next = cc.intervals[(k + 1) % m].a;
            while next < end {
                next += l;
            }
            let gap_length = next - end;
            let curvature_integral = curve.integrate_curvature(end, next);
            let budget = gap_length - t * curvature_integral;
            let segment_length = from.distance(to);
            let margin = budget - segment_length;
            GapCheck {
                index: k,
                segment_length,
                gap_length,
                curvature_integral,
                budget,
                margin,
                passed: margin >= -tolerance,
            }
        })
        .collect();
    let cover_length = cc.trace.length();
    let bound = l - TAU * t;
    let margin = bound - cover_length;
    CoverBoundReport {
        t,
        passed: margin >= -tolerance && gaps.iter().all(|g| g.passed),
        gaps,
        cover_length,
        bound,
        margin,
        tolerance,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HartmanReport {
    pub t: f64,
    pub n_components: usize,
    pub length: f64,
    /// `L - 2 pi t`.
    pub bound: f64,
    /// `bound - |S_t|`.
    pub plain_margin: f64,
    /// `dist(Gamma_n, S_t \ Gamma_n)` per component.
    pub component_distances: Vec<f64>,
    pub distance_sum: f64,
    /// `bound - |S_t| - distance_sum`.
    pub refined_margin: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `|S_t| + sum_n dist(Gamma_n, S_t \ Gamma_n) <= L - 2 pi t`, with an empty
/// sum for a single component.
pub fn verify_hartman_refined(ps: &ParallelSet) -> Result<HartmanReport> {
    if ps.empty {
        return Err(Error::EmptyParallelSet(ps.t));
    }
    if !ps.regular {
        return Err(Error::IrregularLevel(ps.t));
    }
    let n = ps.n_components();
    let polylines: Vec<Vec<Vec2>> = (0..n)
        .map(|c| {
            ps.components[c]
                .iter()
                .flat_map(|&k| ps.arcs[k].points.iter().copied())
                .collect()
        })
        .collect();
    let component_distances: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n)
            .into_par_iter()
            .map(|c| {
                (0..n)
                    .filter(|&o| o != c)
                    .map(|o| polyline_distance(&polylines[c], &polylines[o]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    };
    let distance_sum = if n == 1 { 0.0 } else { component_distances.iter().sum() };
    let l = ps.boundary_length;
    let bound = l - TAU * ps.t;
    let plain_margin = bound - ps.length;
    let refined_margin = plain_margin - distance_sum;
    let tolerance = LENGTH_TOLERANCE * l;
    Ok(HartmanReport {
        t: ps.t,
        n_components: n,
        length: ps.length,
        bound,
        plain_margin,
        component_distances,
        distance_sum,
        refined_margin,
        tolerance,
        passed: refined_margin >= -tolerance,
    })
}

/// Minimum over point pairs, then refined against the segments adjacent to
/// the closest pair.
fn polyline_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let (mut bi, mut bj, mut best) = (0, 0, f64::INFINITY);
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            let d = (p - q).norm_sq();
            if d < best {
                (bi, bj, best) = (i, j, d);
            }
        }
    }
    let mut best = best.sqrt();
    let neighbours = |pts: &[Vec2], i: usize| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(pts.len() - 1);
        [(pts[lo], pts[i]), (pts[i], pts[hi])]
    };
    for (s0, s1) in neighbours(b, bj) {
        best = best.min(point_segment_distance(a[bi], s0, s1));
    }
    for (s0, s1) in neighbours(a, bi) {
        best = best.min(point_segment_distance(b[bj], s0, s1));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ClosedCurveSpec;
    use crate::offset::Domain;

    #[test]
    fn disk_cover_is_the_parallel_circle() {
        let d = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 1024).unwrap();
        let ps = d.parallel_set(0.4).unwrap();
        let cc = build_cover(&ps, d.curve()).unwrap();
        assert_eq!(cc.segments().count(), 0);
        assert!((cc.length - TAU * 0.6).abs() < 1e-12);
        assert!(cc.symmetric);
        let report = verify_cover_bound(&cc, d.curve());
        assert!(report.gaps.is_empty() && report.passed);
        assert!(report.margin.abs() < 1e-12);
        let hart = verify_hartman_refined(&ps).unwrap();
        assert_eq!(hart.distance_sum, 0.0);
        assert!(hart.refined_margin.abs() < 1e-12);
    }

    #[test]
    fn polyline_distance_between_parallel_lines() {
        let a: Vec<Vec2> = (0..11).map(|i| Vec2::new(i as f64 * 0.1, 0.0)).collect();
        let b: Vec<Vec2> = (0..7).map(|i| Vec2::new(0.35 + i as f64 * 0.1, 0.5)).collect();
        assert!((polyline_distance(&a, &b) - 0.5).abs() < 1e-15);
    }
}
