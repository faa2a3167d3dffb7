//! Closed plane curves: declarative specs, arc-length resampling and the
//! differential-geometric primitives (tangent, inward normal, signed
//! curvature) everything else is built on.
//!
//! Fourier specs carry analytic derivatives, so every quantity evaluated
//! through [`SampledCurve::frame_at`] is exact up to the arc-length inversion.
//! Polylines use finite differences and are best-effort.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arclength::ArcLengthTable;
use crate::error::{Error, Result};
use crate::intersect::polyline_is_simple;
use crate::vec2::{point_segment_distance, turn_angle, Vec2};

/// Default number of arc-length samples.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Minimum sample count accepted by [`sample`].
pub const MIN_SAMPLES: usize = 64;

/// Native-grid oversampling factor for the arc-length table.
const TABLE_OVERSAMPLING: usize = 8;

/// Truncated Fourier series `a0 + sum_k cos_coeffs[k-1] cos(k t) + sin_coeffs[k-1] sin(k t)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierSeries {
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub cos_coeffs: Vec<f64>,
    #[serde(default)]
    pub sin_coeffs: Vec<f64>,
}

impl FourierSeries {
    pub fn new(a0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        Self {
            a0,
            cos_coeffs,
            sin_coeffs,
        }
    }

    pub fn max_mode(&self) -> usize {
        let last = |c: &[f64]| c.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
        last(&self.cos_coeffs).max(last(&self.sin_coeffs))
    }

    /// Value and first two derivatives at `theta`.
    pub fn eval(&self, theta: f64) -> [f64; 3] {
        let modes = self.cos_coeffs.len().max(self.sin_coeffs.len());
        let (s1, c1) = theta.sin_cos();
        let (mut sk, mut ck) = (s1, c1);
        let mut out = [self.a0, 0.0, 0.0];
        for k in 1..=modes {
            let a = self.cos_coeffs.get(k - 1).copied().unwrap_or(0.0);
            let b = self.sin_coeffs.get(k - 1).copied().unwrap_or(0.0);
            let kf = k as f64;
            out[0] += a * ck + b * sk;
            out[1] += kf * (b * ck - a * sk);
            out[2] -= kf * kf * (a * ck + b * sk);
            let next_c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = next_c;
        }
        out
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval(theta)[0]
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            a0: self.a0 * factor,
            cos_coeffs: self.cos_coeffs.iter().map(|c| c * factor).collect(),
            sin_coeffs: self.sin_coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// The series of `f(-theta)`.
    fn reflected(&self) -> Self {
        Self {
            a0: self.a0,
            cos_coeffs: self.cos_coeffs.clone(),
            sin_coeffs: self.sin_coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn is_finite(&self) -> bool {
        self.a0.is_finite()
            && self.cos_coeffs.iter().all(|c| c.is_finite())
            && self.sin_coeffs.iter().all(|c| c.is_finite())
    }
}

/// Named shapes that expand to coefficient form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Disk {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `r(theta) = a0 + c2 cos(2 theta)`.
    Peanut {
        a0: f64,
        c2: f64,
    },
}

impl Preset {
    pub fn to_spec(self) -> ClosedCurveSpec {
        match self {
            Preset::Disk { radius } => ClosedCurveSpec::FourierRadial {
                a0: radius,
                cos_coeffs: Vec::new(),
                sin_coeffs: Vec::new(),
            },
            Preset::Ellipse { a, b } => ClosedCurveSpec::FourierXy {
                x: FourierSeries::new(0.0, vec![a], Vec::new()),
                y: FourierSeries::new(0.0, Vec::new(), vec![b]),
            },
            Preset::Peanut { a0, c2 } => ClosedCurveSpec::FourierRadial {
                a0,
                cos_coeffs: vec![0.0, c2],
                sin_coeffs: Vec::new(),
            },
        }
    }
}

/// Declarative description of a closed plane curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedCurveSpec {
    /// `theta -> r(theta) (cos theta, sin theta)` with `r = a0 + sum a_n cos n theta + b_n sin n theta`.
    FourierRadial {
        a0: f64,
        #[serde(default)]
        cos_coeffs: Vec<f64>,
        #[serde(default)]
        sin_coeffs: Vec<f64>,
    },
    FourierXy {
        x: FourierSeries,
        y: FourierSeries,
    },
    /// Closed implicitly: the last vertex connects back to the first.
    Polyline {
        vertices: Vec<[f64; 2]>,
    },
}

impl ClosedCurveSpec {
    pub fn disk(radius: f64) -> Self {
        Preset::Disk { radius }.to_spec()
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Preset::Ellipse { a, b }.to_spec()
    }

    pub fn peanut(a0: f64, c2: f64) -> Self {
        Preset::Peanut { a0, c2 }.to_spec()
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, ClosedCurveSpec::Polyline { .. })
    }

    /// Checks the invariants that can be verified without sampling.
    pub fn validate(&self) -> Result<()> {
        match self {
            ClosedCurveSpec::FourierRadial { .. } => {
                let radial = self.radial_series().expect("radial");
                if !radial.is_finite() {
                    return Err(Error::InvalidCurve("non-finite coefficient".into()));
                }
                let (min, theta) = min_on_grid(&radial);
                if min <= 0.0 {
                    return Err(Error::NonPositiveRadius { min, theta });
                }
                Ok(())
            }
            ClosedCurveSpec::FourierXy { x, y } => {
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::InvalidCurve("non-finite coefficient".into()));
                }
                if x.max_mode() == 0 && y.max_mode() == 0 {
                    return Err(Error::InvalidCurve("constant fourier_xy curve".into()));
                }
                Ok(())
            }
            ClosedCurveSpec::Polyline { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidCurve(format!(
                        "polyline needs at least 3 vertices, got {}",
                        vertices.len()
                    )));
                }
                for (i, v) in vertices.iter().enumerate() {
                    if !v[0].is_finite() || !v[1].is_finite() {
                        return Err(Error::InvalidCurve(format!("vertex {i} is not finite")));
                    }
                    let next = &vertices[(i + 1) % vertices.len()];
                    if v == next {
                        return Err(Error::InvalidCurve(format!("repeated consecutive vertex at index {i}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// The same curve scaled about the origin by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            ClosedCurveSpec::FourierRadial {
                a0,
                cos_coeffs,
                sin_coeffs,
            } => ClosedCurveSpec::FourierRadial {
                a0: a0 * factor,
                cos_coeffs: cos_coeffs.iter().map(|c| c * factor).collect(),
                sin_coeffs: sin_coeffs.iter().map(|c| c * factor).collect(),
            },
            ClosedCurveSpec::FourierXy { x, y } => ClosedCurveSpec::FourierXy {
                x: x.scaled(factor),
                y: y.scaled(factor),
            },
            ClosedCurveSpec::Polyline { vertices } => ClosedCurveSpec::Polyline {
                vertices: vertices.iter().map(|v| [v[0] * factor, v[1] * factor]).collect(),
            },
        }
    }

    fn radial_series(&self) -> Option<FourierSeries> {
        match self {
            ClosedCurveSpec::FourierRadial {
                a0,
                cos_coeffs,
                sin_coeffs,
            } => Some(FourierSeries::new(*a0, cos_coeffs.clone(), sin_coeffs.clone())),
            _ => None,
        }
    }

    fn smooth_curve(&self) -> Option<SmoothCurve> {
        match self {
            ClosedCurveSpec::FourierRadial { .. } => Some(SmoothCurve::Radial(self.radial_series().expect("radial"))),
            ClosedCurveSpec::FourierXy { x, y } => Some(SmoothCurve::Xy(x.clone(), y.clone())),
            ClosedCurveSpec::Polyline { .. } => None,
        }
    }
}

fn min_on_grid(series: &FourierSeries) -> (f64, f64) {
    let m = (64 * series.max_mode()).max(1024);
    (0..m)
        .map(|i| {
            let theta = TAU * i as f64 / m as f64;
            (series.value(theta), theta)
        })
        .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc })
}

fn number(obj: &serde_json::Map<String, Value>, keys: &[&str]) -> Result<f64> {
    keys.iter()
        .find_map(|k| obj.get(*k))
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Parse(format!("missing numeric field `{}`", keys[0])))
}

/// Parses and validates a curve document (JSON). Presets are expanded to
/// their coefficient form.
pub fn parse_spec(document: &str) -> Result<ClosedCurveSpec> {
    let value: Value = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("document must be an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing string field `kind`".into()))?;
    let spec = match kind {
        "preset" => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("preset needs a `name`".into()))?;
            let preset = match name {
                "disk" => Preset::Disk {
                    radius: number(obj, &["R", "r", "radius"])?,
                },
                "ellipse" => Preset::Ellipse {
                    a: number(obj, &["a"])?,
                    b: number(obj, &["b"])?,
                },
                "peanut" => Preset::Peanut {
                    a0: number(obj, &["a0"])?,
                    c2: number(obj, &["c2"])?,
                },
                other => {
                    return Err(Error::Unknown {
                        what: "preset",
                        name: other.to_string(),
                    })
                }
            };
            match preset {
                Preset::Disk { radius } if radius <= 0.0 => {
                    return Err(Error::InvalidCurve("disk radius must be positive".into()))
                }
                Preset::Ellipse { a, b } if a <= 0.0 || b <= 0.0 => {
                    return Err(Error::InvalidCurve("ellipse semi-axes must be positive".into()))
                }
                _ => {}
            }
            preset.to_spec()
        }
        "fourier_radial" | "fourier_xy" | "polyline" => {
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?
        }
        other => {
            return Err(Error::Unknown {
                what: "curve kind",
                name: other.to_string(),
            })
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Analytic parametrization over the native parameter `theta` in `[0, 2 pi)`.
#[derive(Debug, Clone)]
enum SmoothCurve {
    Radial(FourierSeries),
    Xy(FourierSeries, FourierSeries),
}

impl SmoothCurve {
    /// Position and its first two derivatives in the native parameter.
    #[inline]
    fn eval(&self, theta: f64) -> [Vec2; 3] {
        match self {
            SmoothCurve::Radial(r) => {
                let [r0, r1, r2] = r.eval(theta);
                let (s, c) = theta.sin_cos();
                let e = Vec2::new(c, s);
                let e_perp = Vec2::new(-s, c);
                [e * r0, e * r1 + e_perp * r0, e * (r2 - r0) + e_perp * (2.0 * r1)]
            }
            SmoothCurve::Xy(x, y) => {
                let [x0, x1, x2] = x.eval(theta);
                let [y0, y1, y2] = y.eval(theta);
                [Vec2::new(x0, y0), Vec2::new(x1, y1), Vec2::new(x2, y2)]
            }
        }
    }

    #[inline]
    fn speed(&self, theta: f64) -> f64 {
        self.eval(theta)[1].norm()
    }

    fn frame(&self, theta: f64) -> Frame {
        let [p, d1, d2] = self.eval(theta);
        let speed = d1.norm();
        let tangent = d1 / speed;
        Frame {
            point: p,
            tangent,
            normal: tangent.perp(),
            curvature: d1.cross(d2) / (speed * speed * speed),
        }
    }
}

/// Position, unit tangent, inward unit normal and signed curvature at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
}

impl Frame {
    /// The offset point `point + t * normal`.
    #[inline]
    pub fn offset(&self, t: f64) -> Vec2 {
        self.point + self.normal * t
    }
}

#[derive(Debug)]
enum Param {
    Smooth {
        curve: SmoothCurve,
        table: ArcLengthTable,
        /// Native parameter of each sample.
        theta: Vec<f64>,
    },
    Polyline,
}

/// Arc-length resampled closed curve, oriented counterclockwise.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub n: usize,
    pub length: f64,
    pub s: Vec<f64>,
    pub points: Vec<Vec2>,
    pub tangents: Vec<Vec2>,
    pub normals: Vec<Vec2>,
    pub curvatures: Vec<f64>,
    spec: Arc<ClosedCurveSpec>,
    param: Arc<Param>,
}

/// Samples `spec` at `n` points equally spaced in arc length and rejects
/// self-intersecting curves.
pub fn sample(spec: &ClosedCurveSpec, n: usize) -> Result<SampledCurve> {
    let curve = SampledCurve::sample_unchecked(spec, n)?;
    if !curve.is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(curve)
}

impl SampledCurve {
    /// Like [`sample`] but skips the simplicity check.
    pub fn sample_unchecked(spec: &ClosedCurveSpec, n: usize) -> Result<Self> {
        if n < MIN_SAMPLES {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                reason: format!("at least {MIN_SAMPLES} samples are required"),
            });
        }
        spec.validate()?;
        let spec = orient_ccw(spec);
        match spec.smooth_curve() {
            Some(curve) => Self::sample_smooth(spec, curve, n),
            None => Self::sample_polyline(spec, n),
        }
    }

    fn sample_smooth(spec: ClosedCurveSpec, curve: SmoothCurve, n: usize) -> Result<Self> {
        let knots = ArcLengthTable::uniform_knots(0.0, TAU, TABLE_OVERSAMPLING * n);
        let table = ArcLengthTable::build(knots, |th| curve.speed(th))?;
        let length = table.total();
        let h = length / n as f64;
        let s: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let theta: Vec<f64> = s.iter().map(|&si| table.param_of(si, |th| curve.speed(th))).collect();
        let frames: Vec<Frame> = theta.iter().map(|&th| curve.frame(th)).collect();
        Ok(Self::from_frames(
            spec,
            length,
            s,
            &frames,
            Param::Smooth { curve, table, theta },
        ))
    }

    fn sample_polyline(spec: ClosedCurveSpec, n: usize) -> Result<Self> {
        let ClosedCurveSpec::Polyline { vertices } = &spec else {
            unreachable!("polyline spec");
        };
        let verts: Vec<Vec2> = vertices.iter().map(|&v| v.into()).collect();
        let m = verts.len();
        let mut cumulative = vec![0.0];
        for k in 0..m {
            let step = verts[k].distance(verts[(k + 1) % m]);
            cumulative.push(cumulative[k] + step);
        }
        let length = cumulative[m];
        let h = length / n as f64;
        let s: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let mut k = 0;
        let points: Vec<Vec2> = s
            .iter()
            .map(|&si| {
                while k + 1 < m && cumulative[k + 1] <= si {
                    k += 1;
                }
                let u = (si - cumulative[k]) / (cumulative[k + 1] - cumulative[k]);
                verts[k].lerp(verts[(k + 1) % m], u)
            })
            .collect();
        let frames: Vec<Frame> = (0..n)
            .map(|i| {
                let prev = points[(i + n - 1) % n];
                let next = points[(i + 1) % n];
                let tangent = (next - prev).normalized();
                let curvature = turn_angle(points[i] - prev, next - points[i]) / h;
                Frame {
                    point: points[i],
                    tangent,
                    normal: tangent.perp(),
                    curvature,
                }
            })
            .collect();
        Ok(Self::from_frames(spec, length, s, &frames, Param::Polyline))
    }

    fn from_frames(spec: ClosedCurveSpec, length: f64, s: Vec<f64>, frames: &[Frame], param: Param) -> Self {
        Self {
            n: frames.len(),
            length,
            s,
            points: frames.iter().map(|f| f.point).collect(),
            tangents: frames.iter().map(|f| f.tangent).collect(),
            normals: frames.iter().map(|f| f.normal).collect(),
            curvatures: frames.iter().map(|f| f.curvature).collect(),
            spec: Arc::new(spec),
            param: Arc::new(param),
        }
    }

    /// The counterclockwise-oriented spec this curve was sampled from.
    pub fn spec(&self) -> &ClosedCurveSpec {
        &self.spec
    }

    pub fn is_smooth(&self) -> bool {
        matches!(*self.param, Param::Smooth { .. })
    }

    /// Sample spacing `L / n`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn frame(&self, i: usize) -> Frame {
        Frame {
            point: self.points[i],
            tangent: self.tangents[i],
            normal: self.normals[i],
            curvature: self.curvatures[i],
        }
    }

    /// Frame at an arbitrary arc length (taken modulo `L`).
    pub fn frame_at(&self, s: f64) -> Frame {
        let s = s.rem_euclid(self.length);
        match &*self.param {
            Param::Smooth { curve, table, .. } => curve.frame(table.param_of(s, |th| curve.speed(th))),
            Param::Polyline => {
                let h = self.spacing();
                let i = ((s / h).floor() as usize).min(self.n - 1);
                let j = (i + 1) % self.n;
                let u = (s - self.s[i]) / h;
                let tangent = self.tangents[i].lerp(self.tangents[j], u).normalized();
                Frame {
                    point: self.points[i].lerp(self.points[j], u),
                    tangent,
                    normal: tangent.perp(),
                    curvature: self.curvatures[i] + u * (self.curvatures[j] - self.curvatures[i]),
                }
            }
        }
    }

    /// Distance from `x` to the curve near sample `i`, refined by a projection
    /// onto the parametrization between the neighbouring samples.
    pub(crate) fn local_distance(&self, x: Vec2, i: usize) -> f64 {
        let n = self.n;
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        match &*self.param {
            Param::Polyline => point_segment_distance(x, self.points[prev], self.points[i])
                .min(point_segment_distance(x, self.points[i], self.points[next])),
            Param::Smooth { curve, theta, .. } => {
                let wrap = |d: f64| (d + PI).rem_euclid(TAU) - PI;
                let center = theta[i];
                let width = wrap(theta[next] - center).abs().max(wrap(center - theta[prev]).abs());
                project(curve, x, center, width)
            }
        }
    }

    /// Composite (periodic trapezoid) quadrature of `kappa ds`.
    pub fn total_curvature(&self) -> f64 {
        self.curvatures.iter().sum::<f64>() * self.spacing()
    }

    /// Maximum curvature, refined around the discrete argmax.
    pub fn kappa_max(&self) -> f64 {
        let n = self.n;
        let (i, &k_i) = self
            .curvatures
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        let k_prev = self.curvatures[(i + n - 1) % n];
        let k_next = self.curvatures[(i + 1) % n];
        let denom = k_prev - 2.0 * k_i + k_next;
        let parabolic = if denom < 0.0 {
            let shift = 0.5 * (k_prev - k_next) / denom;
            k_i - 0.25 * (k_prev - k_next) * shift
        } else {
            k_i
        };
        if !self.is_smooth() {
            return parabolic;
        }
        let h = self.spacing();
        let golden = golden_max(self.s[i] - h, self.s[i] + h, |s| self.frame_at(s).curvature);
        golden.max(k_i)
    }

    /// True when no two non-adjacent sample segments intersect.
    pub fn is_simple(&self) -> bool {
        polyline_is_simple(&self.points, true, 1e-12 * self.length)
    }

    /// `int_a^b kappa ds` for `a <= b`, possibly wrapping past `L`, computed
    /// as the unwrapped turning of the tangent (the exact antiderivative).
    pub fn integrate_curvature(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let h = self.spacing();
        let start = self.frame_at(a).tangent;
        let end = self.frame_at(b).tangent;
        let first = (a / h).floor() as i64 + 1;
        let last = (b / h).ceil() as i64 - 1;
        let mut prev = start;
        let mut total = 0.0;
        for k in first..=last {
            let i = k.rem_euclid(self.n as i64) as usize;
            let tangent = self.tangents[i];
            total += turn_angle(prev, tangent);
            prev = tangent;
        }
        total + turn_angle(prev, end)
    }

    /// Shoelace area of the sample polygon (positive for counterclockwise).
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Even-odd containment test against the sample polygon.
    pub fn contains(&self, x: Vec2) -> bool {
        let mut inside = false;
        let n = self.n;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            if (a.y > x.y) != (b.y > x.y) {
                let cross_x = a.x + (x.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x.x < cross_x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        bounding_box(&self.points)
    }

    /// Central symmetry test: for an arc-length parametrized centrally
    /// symmetric curve, `gamma(s + L/2) = -gamma(s)`.
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        if !self.n.is_multiple_of(2) {
            return false;
        }
        let half = self.n / 2;
        (0..self.n).all(|i| (self.points[i] + self.points[(i + half) % self.n]).norm() <= tol)
    }
}

pub(crate) fn signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    0.5 * (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum::<f64>()
}

pub(crate) fn bounding_box(points: &[Vec2]) -> (Vec2, Vec2) {
    points.iter().fold(
        (
            Vec2::new(f64::INFINITY, f64::INFINITY),
            Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Vec2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Vec2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    )
}

/// Returns a counterclockwise spec for the same curve.
fn orient_ccw(spec: &ClosedCurveSpec) -> ClosedCurveSpec {
    match spec {
        // r(theta)(cos theta, sin theta) with r > 0 always runs counterclockwise.
        ClosedCurveSpec::FourierRadial { .. } => spec.clone(),
        ClosedCurveSpec::FourierXy { x, y } => {
            let curve = SmoothCurve::Xy(x.clone(), y.clone());
            let m = 16 * (x.max_mode().max(y.max_mode()) + 4);
            let pts: Vec<Vec2> = (0..m).map(|i| curve.eval(TAU * i as f64 / m as f64)[0]).collect();
            if signed_area(&pts) < 0.0 {
                ClosedCurveSpec::FourierXy {
                    x: x.reflected(),
                    y: y.reflected(),
                }
            } else {
                spec.clone()
            }
        }
        ClosedCurveSpec::Polyline { vertices } => {
            let pts: Vec<Vec2> = vertices.iter().map(|&v| v.into()).collect();
            if signed_area(&pts) < 0.0 {
                ClosedCurveSpec::Polyline {
                    vertices: vertices.iter().rev().copied().collect(),
                }
            } else {
                spec.clone()
            }
        }
    }
}

/// Minimum distance from `x` to the parametrized curve over
/// `[center - width, center + width]`, by safeguarded Newton on the
/// stationarity condition `(c(theta) - x) . c'(theta) = 0`.
fn project(curve: &SmoothCurve, x: Vec2, center: f64, width: f64) -> f64 {
    let dist = |th: f64| curve.eval(th)[0].distance(x);
    let residual = |th: f64| {
        let [p, d1, d2] = curve.eval(th);
        let r = p - x;
        (r.dot(d1), d1.norm_sq() + r.dot(d2))
    };
    let mut lo = center - width;
    let mut hi = center + width;
    let endpoint_best = dist(lo).min(dist(hi)).min(dist(center));
    let (f_lo, _) = residual(lo);
    let (f_hi, _) = residual(hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return endpoint_best;
    }
    let mut theta = center;
    for _ in 0..60 {
        let (f, df) = residual(theta);
        if f < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let mut next = theta - f / df;
        if !(df > 0.0) || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - theta).abs() <= 1e-15 * (1.0 + theta.abs()) {
            theta = next;
            break;
        }
        theta = next;
    }
    dist(theta).min(endpoint_best)
}

fn golden_max(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    fc.max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_preset_expands_to_constant_radius() {
        let spec = parse_spec(r#"{"kind": "preset", "name": "disk", "R": 1}"#).unwrap();
        assert_eq!(spec, ClosedCurveSpec::disk(1.0));
        let ClosedCurveSpec::FourierRadial {
            a0,
            cos_coeffs,
            sin_coeffs,
        } = spec
        else {
            panic!("expected radial spec");
        };
        assert_eq!(a0, 1.0);
        assert!(cos_coeffs.is_empty() && sin_coeffs.is_empty());
    }

    #[test]
    fn peanut_preset_expands_to_mode_two() {
        let spec = parse_spec(r#"{"kind": "preset", "name": "peanut", "a0": 1, "c2": 0.7}"#).unwrap();
        assert_eq!(
            spec,
            ClosedCurveSpec::FourierRadial {
                a0: 1.0,
                cos_coeffs: vec![0.0, 0.7],
                sin_coeffs: vec![]
            }
        );
    }

    #[test]
    fn negative_radial_profile_is_rejected() {
        let err = parse_spec(r#"{"kind": "fourier_radial", "a0": 0.1, "cos_coeffs": [0, 0.5]}"#).unwrap_err();
        let Error::NonPositiveRadius { min, theta } = err else {
            panic!("unexpected error {err}");
        };
        assert!(min < 0.0);
        assert!((theta - PI / 2.0).abs() < 0.01 || (theta - 3.0 * PI / 2.0).abs() < 0.01);
    }

    #[test]
    fn malformed_and_unknown_documents() {
        assert!(matches!(parse_spec("{not json"), Err(Error::Parse(_))));
        assert!(matches!(parse_spec(r#"{"kind": "nurbs"}"#), Err(Error::Unknown { .. })));
        assert!(matches!(
            parse_spec(r#"{"kind": "preset", "name": "star"}"#),
            Err(Error::Unknown { .. })
        ));
        assert!(matches!(
            parse_spec(r#"{"kind": "polyline", "vertices": [[0,0],[1,0]]}"#),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            parse_spec(r#"{"kind": "polyline", "vertices": [[0,0],[1,0],[1,0],[0,1]]}"#),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn too_few_samples() {
        let err = SampledCurve::sample_unchecked(&ClosedCurveSpec::disk(1.0), 10).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { name: "n", .. }));
    }

    #[test]
    fn disk_samples_are_exact() {
        let c = sample(&ClosedCurveSpec::disk(1.0), 4096).unwrap();
        assert!((c.length - TAU).abs() < 1e-10);
        for (i, k) in c.curvatures.iter().enumerate() {
            assert!((k - 1.0).abs() < 1e-8, "kappa[{i}] = {k}");
        }
        let c2 = sample(&ClosedCurveSpec::disk(2.0), 1024).unwrap();
        assert!(c2.curvatures.iter().all(|k| (k - 0.5).abs() < 1e-10));
        assert!((c.kappa_max() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clockwise_specs_are_reoriented() {
        let cw = ClosedCurveSpec::FourierXy {
            x: FourierSeries::new(0.0, vec![2.0], vec![]),
            y: FourierSeries::new(0.0, vec![], vec![-1.0]),
        };
        let c = sample(&cw, 512).unwrap();
        assert!(c.signed_area() > 0.0);
        assert!((c.total_curvature() - TAU).abs() < 1e-9);

        let square = ClosedCurveSpec::Polyline {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
        };
        let c = sample(&square, 256).unwrap();
        assert!(c.signed_area() > 0.0);
        assert!((c.length - 4.0).abs() < 1e-12);
        assert!((c.total_curvature() - TAU).abs() < 1e-9);
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let eight = ClosedCurveSpec::FourierXy {
            x: FourierSeries::new(0.0, vec![], vec![0.0, 1.0]),
            y: FourierSeries::new(0.0, vec![], vec![1.0]),
        };
        let c = SampledCurve::sample_unchecked(&eight, 1024).unwrap();
        assert!(!c.is_simple());
        assert!(matches!(sample(&eight, 1024), Err(Error::NotSimple)));
    }

    #[test]
    fn frame_at_matches_samples() {
        let c = sample(&ClosedCurveSpec::peanut(1.0, 0.7), 512).unwrap();
        for i in (0..c.n).step_by(37) {
            let f = c.frame_at(c.s[i]);
            assert!(f.point.distance(c.points[i]) < 1e-12);
            assert!((f.curvature - c.curvatures[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_curvature_integrals_add_up() {
        let c = sample(&ClosedCurveSpec::peanut(1.0, 0.7), 1024).unwrap();
        let l = c.length;
        let whole = c.integrate_curvature(0.3, 0.3 + l);
        assert!((whole - TAU).abs() < 1e-10);
        let split = c.integrate_curvature(0.3, 1.7) + c.integrate_curvature(1.7, 0.3 + l);
        assert!((split - TAU).abs() < 1e-10);
    }

    #[test]
    fn containment_and_symmetry() {
        let c = sample(&ClosedCurveSpec::peanut(1.0, 0.7), 1024).unwrap();
        assert!(c.contains(Vec2::new(1.0, 0.0)));
        assert!(!c.contains(Vec2::new(0.0, 0.5)));
        assert!(c.is_centrally_symmetric(1e-9));
        let egg = ClosedCurveSpec::FourierRadial {
            a0: 1.0,
            cos_coeffs: vec![0.2],
            sin_coeffs: vec![],
        };
        let c = sample(&egg, 1024).unwrap();
        assert!(!c.is_centrally_symmetric(1e-6));
    }
}
