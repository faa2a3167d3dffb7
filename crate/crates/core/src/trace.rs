//! Piecewise traces made of sampled arcs and straight segments, with the line
//! integrals (length, centroid, p-th moment) used throughout.

use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::quadrature::{gauss8, graded_gauss};
use crate::vec2::{point_segment_distance, Vec2};

/// A sampled arc with quadrature weights for `ds` at each sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcPiece {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    /// A closed arc is periodic: its last sample connects back to the first.
    pub closed: bool,
}

impl ArcPiece {
    /// A closed curve with periodic trapezoid weights.
    pub fn periodic(points: Vec<Vec2>, spacing: f64) -> Self {
        let weights = vec![spacing; points.len()];
        Self {
            points,
            weights,
            closed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Arc(ArcPiece),
    Segment { from: Vec2, to: Vec2 },
}

impl Piece {
    pub fn start(&self) -> Vec2 {
        match self {
            Piece::Arc(arc) => arc.points[0],
            Piece::Segment { from, .. } => *from,
        }
    }

    pub fn end(&self) -> Vec2 {
        match self {
            Piece::Arc(arc) if arc.closed => arc.points[0],
            Piece::Arc(arc) => *arc.points.last().expect("non-empty arc"),
            Piece::Segment { to, .. } => *to,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Piece::Arc(arc) => arc.weights.iter().sum(),
            Piece::Segment { from, to } => from.distance(*to),
        }
    }

    /// `int f ds` over the piece. Segments use 8-point Gauss-Legendre, so `f`
    /// should be smooth along them.
    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        match self {
            Piece::Arc(arc) => arc.points.iter().zip(&arc.weights).map(|(&x, &w)| w * f(x)).sum(),
            Piece::Segment { from, to } => {
                let len = from.distance(*to);
                gauss8().integrate(0.0, 1.0, |u| f(from.lerp(*to, u))) * len
            }
        }
    }

    /// `int |x - center|^p ds`. On segments the integrand is split at the foot
    /// of `center`, where it may fail to be smooth.
    pub fn p_moment(&self, p: f64, center: Vec2) -> f64 {
        match self {
            Piece::Arc(_) => self.integrate(|x| (x - center).norm().powf(p)),
            Piece::Segment { from, to } => {
                let len = from.distance(*to);
                if len == 0.0 {
                    return 0.0;
                }
                let dir = (*to - *from) / len;
                let foot = (center - *from).dot(dir).clamp(0.0, len);
                let f = |u: f64| (*from + dir * u - center).norm().powf(p);
                graded_gauss(foot, len, f) - graded_gauss(foot, 0.0, f)
            }
        }
    }

    fn sample_points(&self, spacing: f64, out: &mut Vec<Vec2>) {
        match self {
            Piece::Arc(arc) => out.extend_from_slice(&arc.points),
            Piece::Segment { from, to } => {
                let m = ((from.distance(*to) / spacing).ceil() as usize).max(1);
                out.extend((0..=m).map(|j| from.lerp(*to, j as f64 / m as f64)));
            }
        }
    }
}

/// An ordered collection of pieces. Closed traces chain end to start; a trace
/// may also be a loose union (the arcs of an inner parallel set).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trace {
    pub pieces: Vec<Piece>,
}

impl Trace {
    pub fn new(pieces: Vec<Piece>) -> Self {
        Self { pieces }
    }

    /// The boundary of a sampled curve as a single closed arc.
    pub fn from_curve(curve: &SampledCurve) -> Self {
        Self::new(vec![Piece::Arc(ArcPiece::periodic(
            curve.points.clone(),
            curve.spacing(),
        ))])
    }

    /// A closed polygon through `vertices`.
    pub fn polygon(vertices: &[Vec2]) -> Self {
        let n = vertices.len();
        Self::new(
            (0..n)
                .map(|i| Piece::Segment {
                    from: vertices[i],
                    to: vertices[(i + 1) % n],
                })
                .collect(),
        )
    }

    /// A segment of the given length centered at the origin along the x-axis,
    /// traversed forward and back.
    pub fn doubly_covered_segment(length: f64) -> Self {
        let a = Vec2::new(-0.25 * length, 0.0);
        let b = Vec2::new(0.25 * length, 0.0);
        Self::new(vec![
            Piece::Segment { from: a, to: b },
            Piece::Segment { from: b, to: a },
        ])
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// Length-weighted mean position.
    pub fn centroid(&self) -> Result<Vec2> {
        let length = self.length();
        if !(length > 0.0) {
            return Err(Error::ZeroLength);
        }
        let x: f64 = self.pieces.iter().map(|pc| pc.integrate(|v| v.x)).sum();
        let y: f64 = self.pieces.iter().map(|pc| pc.integrate(|v| v.y)).sum();
        Ok(Vec2::new(x / length, y / length))
    }

    /// `int |x - center|^p ds`, counting multiply traversed pieces with
    /// multiplicity.
    pub fn p_moment(&self, p: f64, center: Vec2) -> f64 {
        self.pieces.iter().map(|pc| pc.p_moment(p, center)).sum()
    }

    /// Largest gap between consecutive pieces, cyclically.
    pub fn closure_gap(&self) -> f64 {
        let n = self.pieces.len();
        (0..n)
            .map(|k| self.pieces[k].end().distance(self.pieces[(k + 1) % n].start()))
            .fold(0.0, f64::max)
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        !self.pieces.is_empty() && self.closure_gap() <= tol
    }

    /// Points along the trace in order: arc samples as stored, segments
    /// subdivided at roughly `spacing`.
    pub fn polyline(&self, spacing: f64) -> Vec<Vec2> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            piece.sample_points(spacing, &mut out);
        }
        out
    }

    /// The polyline as segments, open arcs and segments chained piece by piece
    /// and closed arcs wrapped around.
    fn segments(&self, spacing: f64) -> Vec<(Vec2, Vec2)> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            let mut pts = Vec::new();
            piece.sample_points(spacing, &mut pts);
            if let Piece::Arc(arc) = piece {
                if arc.closed {
                    pts.push(arc.points[0]);
                }
            }
            if pts.len() == 1 {
                out.push((pts[0], pts[0]));
            }
            out.extend(pts.windows(2).map(|w| (w[0], w[1])));
        }
        out
    }

    /// Distance from `x` to the trace polyline.
    pub fn distance_to(&self, x: Vec2, spacing: f64) -> f64 {
        SegmentIndex::new(self.segments(spacing)).distance(x, f64::INFINITY)
    }

    /// True when reflecting every trace point through the origin lands within
    /// `tol` of the trace.
    pub fn is_centrally_symmetric(&self, spacing: f64, tol: f64) -> bool {
        let index = SegmentIndex::new(self.segments(spacing));
        self.polyline(spacing).iter().all(|&x| index.distance(-x, tol) <= tol)
    }
}

/// Segments sorted by their left end for windowed nearest queries.
struct SegmentIndex {
    segments: Vec<(f64, Vec2, Vec2)>,
    max_width: f64,
}

impl SegmentIndex {
    fn new(raw: Vec<(Vec2, Vec2)>) -> Self {
        let mut segments: Vec<(f64, Vec2, Vec2)> = raw.into_iter().map(|(a, b)| (a.x.min(b.x), a, b)).collect();
        segments.sort_by(|l, r| l.0.total_cmp(&r.0));
        let max_width = segments.iter().map(|(_, a, b)| (a.x - b.x).abs()).fold(0.0, f64::max);
        Self { segments, max_width }
    }

    /// Exact distance when it is at most `radius`; otherwise some value above
    /// `radius` (infinite radius gives the exact distance).
    fn distance(&self, x: Vec2, radius: f64) -> f64 {
        let lo = x.x - radius - self.max_width;
        let hi = x.x + radius;
        let start = if lo.is_finite() {
            self.segments.partition_point(|s| s.0 < lo)
        } else {
            0
        };
        self.segments[start..]
            .iter()
            .take_while(|s| s.0 <= hi)
            .map(|&(_, a, b)| point_segment_distance(x, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}
