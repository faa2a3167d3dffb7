//! Winding numbers of open arcs, endpoint winding numbers, the identity
//! `int kappa = w(start) + w(end)` and the belt inequality
//! `|Gamma| >= |c1 - c2| + t int kappa`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::arclength::ArcLengthTable;
use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::intersect::polyline_is_simple;
use crate::quadrature::simpson_weights;
use crate::vec2::{point_segment_distance, turn_angle, Vec2};

/// Number of times sampling is doubled before unwrapping gives up.
const MAX_REFINEMENTS: usize = 3;

/// A unit-speed open arc sampled at equal spacing on `[s1, s2]`.
#[derive(Debug, Clone, Serialize)]
pub struct OpenArc {
    pub s1: f64,
    pub s2: f64,
    pub points: Vec<Vec2>,
    pub tangents: Vec<Vec2>,
    pub curvatures: Vec<f64>,
    pub simple: bool,
}

impl OpenArc {
    /// Samples a unit-speed parametrization `s -> (point, unit tangent, curvature)`.
    pub fn from_fn(s1: f64, s2: f64, n: usize, f: impl Fn(f64) -> (Vec2, Vec2, f64)) -> Result<Self> {
        if n < 2 || !(s2 > s1) {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                reason: "an arc needs at least 2 samples on a non-empty interval".into(),
            });
        }
        let h = (s2 - s1) / (n - 1) as f64;
        let (mut points, mut tangents, mut curvatures) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for i in 0..n {
            let (p, tan, k) = f(s1 + i as f64 * h);
            points.push(p);
            tangents.push(tan);
            curvatures.push(k);
        }
        let simple = polyline_is_simple(&points, false, 0.0);
        Ok(Self {
            s1,
            s2,
            points,
            tangents,
            curvatures,
            simple,
        })
    }

    /// Arc of the circle about `center`, from angle `phi0` to `phi1`
    /// (counterclockwise when `phi1 > phi0`).
    pub fn circle_arc(center: Vec2, radius: f64, phi0: f64, phi1: f64, n: usize) -> Result<Self> {
        let sign = (phi1 - phi0).signum();
        Self::from_fn(0.0, radius * (phi1 - phi0).abs(), n, |s| {
            let phi = phi0 + sign * s / radius;
            let radial = Vec2::from_angle(phi);
            (center + radial * radius, radial.perp() * sign, sign / radius)
        })
    }

    pub fn segment(a: Vec2, b: Vec2, n: usize) -> Result<Self> {
        let len = a.distance(b);
        let dir = (b - a) / len;
        Self::from_fn(0.0, len, n, |s| (a + dir * s, dir, 0.0))
    }

    /// The piece `[s1, s2]` of a sampled closed curve (`s2 - s1 < L`).
    pub fn from_curve(curve: &SampledCurve, s1: f64, s2: f64, n: usize) -> Result<Self> {
        Self::from_fn(s1, s2, n, |s| {
            let f = curve.frame_at(s);
            (f.point, f.tangent, f.curvature)
        })
    }

    /// Reparametrizes `u -> [c, c', c'']` by arc length. `knots` must include
    /// every parameter where the derivatives are not smooth.
    pub fn from_parametrization(knots: Vec<f64>, n: usize, eval: impl Fn(f64) -> [Vec2; 3]) -> Result<Self> {
        let speed = |u: f64| eval(u)[1].norm();
        let table = ArcLengthTable::build(knots, speed)?;
        Self::from_fn(0.0, table.total(), n, |s| {
            let [p, d1, d2] = eval(table.param_of(s, speed));
            let v = d1.norm();
            (p, d1 / v, d1.cross(d2) / (v * v * v))
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.s2 - self.s1
    }

    pub fn spacing(&self) -> f64 {
        self.length() / (self.len() - 1) as f64
    }

    pub fn start(&self) -> Vec2 {
        self.points[0]
    }

    pub fn end(&self) -> Vec2 {
        *self.points.last().expect("non-empty")
    }

    /// The arc traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            s1: self.s1,
            s2: self.s2,
            points: self.points.iter().rev().copied().collect(),
            tangents: self.tangents.iter().rev().map(|t| -*t).collect(),
            curvatures: self.curvatures.iter().rev().map(|k| -k).collect(),
            simple: self.simple,
        }
    }

    /// Splits at sample `i`; both halves share that sample.
    pub fn split_at(&self, i: usize) -> Result<(Self, Self)> {
        if i == 0 || i + 1 >= self.len() {
            return Err(Error::OutOfRange {
                name: "i",
                value: i as f64,
                reason: "split index must be interior".into(),
            });
        }
        let s = self.s1 + i as f64 * self.spacing();
        let part = |lo: usize, hi: usize, s1: f64, s2: f64| Self {
            s1,
            s2,
            points: self.points[lo..=hi].to_vec(),
            tangents: self.tangents[lo..=hi].to_vec(),
            curvatures: self.curvatures[lo..=hi].to_vec(),
            simple: self.simple,
        };
        Ok((part(0, i, self.s1, s), part(i, self.len() - 1, s, self.s2)))
    }

    /// Total turning of the tangent, from consecutive sample tangents.
    pub fn tangent_turning(&self) -> f64 {
        self.tangents.windows(2).map(|w| turn_angle(w[0], w[1])).sum()
    }

    /// Quadrature of `kappa ds` (Simpson when the panel count is even,
    /// trapezoid otherwise).
    pub fn curvature_quadrature(&self) -> f64 {
        let m = self.len() - 1;
        let h = self.spacing();
        if m >= 2 && m.is_multiple_of(2) {
            simpson_weights(m, h)
                .iter()
                .zip(&self.curvatures)
                .map(|(w, k)| w * k)
                .sum()
        } else {
            let inner: f64 = self.curvatures[1..m].iter().sum();
            h * (inner + 0.5 * (self.curvatures[0] + self.curvatures[m]))
        }
    }

    fn min_distance(&self, x: Vec2) -> f64 {
        self.points
            .windows(2)
            .map(|w| point_segment_distance(x, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindingResult {
    /// `Theta(s2) - Theta(s1)` in radians.
    pub value: f64,
    /// The unwrapped angle of `gamma(s) - x0` at the (possibly refined) samples.
    pub angle_trace: Vec<f64>,
    pub basepoint: Vec2,
}

/// Winding number of the arc about a point off the arc.
pub fn winding_number(arc: &OpenArc, x0: Vec2) -> Result<WindingResult> {
    let on_arc_tol = 1e-12 * (1.0 + arc.length());
    let d = arc.min_distance(x0);
    if d <= on_arc_tol {
        return Err(Error::PointOnArc(d));
    }
    let mut points = arc.points.clone();
    let mut tangents = arc.tangents.clone();
    let mut h = arc.spacing();
    for _ in 0..=MAX_REFINEMENTS {
        if let Some(angle_trace) = unwrap_angles(&points, x0) {
            let value = angle_trace.last().expect("non-empty") - angle_trace[0];
            return Ok(WindingResult {
                value,
                angle_trace,
                basepoint: x0,
            });
        }
        (points, tangents) = hermite_refine(&points, &tangents, h);
        h *= 0.5;
    }
    Err(Error::Unwrap(format!(
        "angle increments stay above pi/2 after {MAX_REFINEMENTS} refinements"
    )))
}

/// Unwrapped angles, or `None` if any increment reaches `pi/2`.
fn unwrap_angles(points: &[Vec2], x0: Vec2) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(points.len());
    let mut prev = points[0] - x0;
    let mut theta = prev.angle().rem_euclid(2.0 * PI);
    out.push(theta);
    for &p in &points[1..] {
        let v = p - x0;
        let step = turn_angle(prev, v);
        if step.abs() >= FRAC_PI_2 {
            return None;
        }
        theta += step;
        out.push(theta);
        prev = v;
    }
    Some(out)
}

/// Inserts cubic Hermite midpoints between consecutive samples.
fn hermite_refine(points: &[Vec2], tangents: &[Vec2], h: f64) -> (Vec<Vec2>, Vec<Vec2>) {
    let mut p_out = Vec::with_capacity(2 * points.len());
    let mut t_out = Vec::with_capacity(2 * points.len());
    for i in 0..points.len() - 1 {
        let (p0, p1, t0, t1) = (points[i], points[i + 1], tangents[i], tangents[i + 1]);
        p_out.push(p0);
        t_out.push(t0);
        p_out.push((p0 + p1) * 0.5 + (t0 - t1) * (h / 8.0));
        t_out.push(((p1 - p0) * (1.5 / h) - (t0 + t1) * 0.25).normalized());
    }
    p_out.push(*points.last().expect("non-empty"));
    t_out.push(*tangents.last().expect("non-empty"));
    (p_out, t_out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Start,
    End,
}

/// Relative spread above which the Richardson estimates are rejected.
const EXTRAPOLATION_TOL: f64 = 1e-4;

/// Winding number about an endpoint: the limit over base points approaching
/// it from outside along the tangent line, Richardson-extrapolated from
/// offsets `h`, `h/2`, `h/4` with `h = 1e-3 |Gamma|`.
pub fn endpoint_winding(arc: &OpenArc, which: Endpoint) -> Result<f64> {
    let (p, tan) = match which {
        Endpoint::Start => (arc.start(), -arc.tangents[0]),
        Endpoint::End => (arc.end(), *arc.tangents.last().expect("non-empty")),
    };
    endpoint_winding_along(arc, |h| p + tan * h)
}

/// Like [`endpoint_winding`] with base points `extension(h)` on a caller
/// supplied extension of the arc beyond the endpoint.
pub fn endpoint_winding_along(arc: &OpenArc, extension: impl Fn(f64) -> Vec2) -> Result<f64> {
    let h = 1e-3 * arc.length();
    let w = |k: f64| winding_number(arc, extension(h / k)).map(|r| r.value);
    let (w1, w2, w4) = (w(1.0)?, w(2.0)?, w(4.0)?);
    let r1 = 2.0 * w2 - w1;
    let r2 = 2.0 * w4 - w2;
    let spread = (r2 - r1).abs();
    if !spread.is_finite() || spread > EXTRAPOLATION_TOL * (1.0 + r2.abs()) {
        return Err(Error::Extrapolation(spread));
    }
    Ok((4.0 * r2 - r1) / 3.0)
}

/// `(int kappa ds, w(start) + w(end))`.
pub fn curvature_winding_identity(arc: &OpenArc) -> Result<(f64, f64)> {
    let lhs = arc.curvature_quadrature();
    let rhs = endpoint_winding(arc, Endpoint::Start)? + endpoint_winding(arc, Endpoint::End)?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub length: f64,
    pub center_distance: f64,
    pub t: f64,
    /// `int kappa ds` by tangent turning.
    pub curvature_integral: f64,
    /// `length - center_distance - t curvature_integral`.
    pub margin: f64,
}

/// Positional slack for the endpoint-on-circle hypothesis.
const HYPOTHESIS_TOL: f64 = 1e-6;

/// Checks the endpoint hypotheses (start on the circle of radius `t` about
/// `c1`, end on the one about `c2`, tangent to both in the counterclockwise
/// sense) and reports `|Gamma| - |c1 - c2| - t int kappa`. Extendability of
/// the arc to a closed curve around both disks is the caller's responsibility.
pub fn geometric_inequality_check(arc: &OpenArc, c1: Vec2, c2: Vec2, t: f64) -> Result<InequalityReport> {
    let tol = HYPOTHESIS_TOL * (1.0 + t);
    let end_tangent = *arc.tangents.last().expect("non-empty");
    for (name, p, tan, c) in [
        ("start", arc.start(), arc.tangents[0], c1),
        ("end", arc.end(), end_tangent, c2),
    ] {
        let r = p - c;
        if (r.norm() - t).abs() > tol {
            return Err(Error::Hypothesis(format!(
                "{name} point is at distance {:.9} from its center, expected {t}",
                r.norm()
            )));
        }
        let expected = r.perp() / r.norm();
        if tan.distance(expected) > tol {
            return Err(Error::Hypothesis(format!(
                "{name} tangent is not counterclockwise tangent to its circle"
            )));
        }
    }
    let curvature_integral = arc.tangent_turning();
    let length = arc.length();
    let center_distance = c1.distance(c2);
    Ok(InequalityReport {
        length,
        center_distance,
        t,
        curvature_integral,
        margin: length - center_distance - t * curvature_integral,
    })
}

/// Centers and radius of the belt configuration used by [`belt_arc`].
pub const BELT_CENTERS: (Vec2, Vec2) = (Vec2::new(0.0, 0.0), Vec2::new(3.0, 0.0));
pub const BELT_RADIUS: f64 = 1.0;

/// The lower belt around the unit disks about `(0,0)` and `(3,0)`: a quarter
/// circle from `(-1,0)`, the segment from `(0,-1)` to `(3,-1)` and a quarter
/// circle up to `(4,0)`. Piece `j` is pushed outward by
/// `d(x) = A_j sin^4(pi x) (1 + 0.5 sin(k pi x))` in its local parameter
/// `x in [0, 1]`, so `d`, `d'` and `d''` vanish at every joint and the
/// endpoint hypotheses hold for all `A_j >= 0`.
pub fn belt_arc(amplitudes: [f64; 3], harmonic: f64, n: usize) -> Result<OpenArc> {
    let q = FRAC_PI_2;
    let ell = 2.0 * q + 3.0;
    let (c1, c2) = BELT_CENTERS;
    let starts = [0.0, q, q + 3.0];
    let lengths = [q, 3.0, q];
    let piece = move |u: f64| {
        if u < q {
            0
        } else if u <= q + 3.0 {
            1
        } else {
            2
        }
    };
    let base = move |u: f64| -> (Vec2, Vec2, f64) {
        match piece(u) {
            0 => {
                let radial = Vec2::from_angle(PI + u);
                (c1 + radial, radial.perp(), 1.0)
            }
            1 => (Vec2::new(u - q, -1.0), Vec2::new(1.0, 0.0), 0.0),
            _ => {
                let radial = Vec2::from_angle(-q + (u - q - 3.0));
                (c2 + radial, radial.perp(), 1.0)
            }
        }
    };
    let d = move |u: f64| -> [f64; 3] {
        let j = piece(u);
        let w = PI / lengths[j];
        let x = u - starts[j];
        let (s, c) = (w * x).sin_cos();
        let (sk, ck) = (harmonic * w * x).sin_cos();
        let g = s.powi(4);
        let g1 = 4.0 * w * s.powi(3) * c;
        let g2 = 4.0 * w * w * (3.0 * s * s * c * c - s.powi(4));
        let m = 1.0 + 0.5 * sk;
        let m1 = 0.5 * harmonic * w * ck;
        let m2 = -0.5 * harmonic * harmonic * w * w * sk;
        let a = amplitudes[j];
        [a * g * m, a * (g1 * m + g * m1), a * (g2 * m + 2.0 * g1 * m1 + g * m2)]
    };
    let eval = move |u: f64| -> [Vec2; 3] {
        let (p, tan, kappa) = base(u);
        let normal = tan.perp();
        let outward = -normal;
        let [d0, d1, d2] = d(u);
        [
            p + outward * d0,
            tan * (1.0 + d0 * kappa) + outward * d1,
            tan * (2.0 * d1 * kappa) + outward * d2 + normal * (kappa * (1.0 + d0 * kappa)),
        ]
    };
    let per_piece = (n / 2).max(16);
    let mut knots = ArcLengthTable::uniform_knots(0.0, q, per_piece);
    knots.pop();
    let mut mid = ArcLengthTable::uniform_knots(q, q + 3.0, per_piece);
    mid.pop();
    knots.extend(mid);
    knots.extend(ArcLengthTable::uniform_knots(q + 3.0, ell, per_piece));
    OpenArc::from_parametrization(knots, n, eval)
}
