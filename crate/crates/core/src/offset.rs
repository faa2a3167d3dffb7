//! Distance to the boundary, in-radius, the unpruned offset trace and the
//! inner parallel set `S_t = { x in domain : dist(x, boundary) = t }`.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{sample, ClosedCurveSpec, SampledCurve};
use crate::error::{Error, Result};
use crate::intersect::polyline_is_simple;
use crate::quadrature::gauss8;
use crate::simplex::{minimize, SimplexOptions};
use crate::trace::{ArcPiece, Piece, Trace};
use crate::vec2::Vec2;

/// Bisection steps used to locate interval endpoints.
const ENDPOINT_BISECTIONS: usize = 40;

/// Width of one Gauss-Legendre panel on a pruned arc, in samples.
const ARC_PANEL_SAMPLES: f64 = 4.0;

/// Resolution of the coarse in-radius search grid (per axis).
const INRADIUS_GRID: usize = 64;

/// Numerical tolerances, all scaled to the sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// `10 L / n`: slack for the distance invariants of `S_t`.
    pub dist: f64,
    /// `5 L / n`: endpoint matching when closing components.
    pub join: f64,
    /// Activity slack `rho(Phi(s, t)) >= t - activity`. Offset points and
    /// boundary distances are exact up to rounding, so this is tight.
    pub activity: f64,
    /// Slack on the curvature bound `kappa <= 1/t` over active intervals.
    pub kappa: f64,
}

impl Tolerances {
    pub fn for_curve(curve: &SampledCurve) -> Self {
        let h = curve.spacing();
        let dist = 10.0 * h;
        Self {
            dist,
            join: 5.0 * h,
            activity: 1e-9 * curve.length.max(1.0),
            kappa: 1e-4,
        }
    }
}

/// Distance from `x` to the boundary: coarse minimum over samples, then a
/// projection onto the parametrization around every competitive local minimum.
pub fn distance_to_boundary(x: Vec2, curve: &SampledCurve) -> f64 {
    let n = curve.n;
    let pts = &curve.points;
    let d2 = |i: usize| (pts[i] - x).norm_sq();
    let min2 = (0..n).map(d2).fold(f64::INFINITY, f64::min);
    let cutoff = min2.sqrt() + curve.spacing();
    let cutoff2 = cutoff * cutoff;
    let mut best = min2.sqrt();
    let mut prev = d2(n - 1);
    let mut cur = d2(0);
    for i in 0..n {
        let next = d2((i + 1) % n);
        if cur <= cutoff2 && cur <= prev && cur <= next {
            best = best.min(curve.local_distance(x, i));
        }
        prev = cur;
        cur = next;
    }
    best
}

/// In-radius and a maximizer of the distance function: a coarse interior grid
/// search refined by simplex ascent from the best few grid points.
pub fn inradius(curve: &SampledCurve) -> Result<(f64, Vec2)> {
    let (lo, hi) = curve.bounding_box();
    let m = INRADIUS_GRID;
    let cell = Vec2::new((hi.x - lo.x) / m as f64, (hi.y - lo.y) / m as f64);
    let mut grid: Vec<(f64, Vec2)> = (0..m * m)
        .into_par_iter()
        .filter_map(|k| {
            let x = Vec2::new(
                lo.x + (k % m) as f64 * cell.x + 0.5 * cell.x,
                lo.y + (k / m) as f64 * cell.y + 0.5 * cell.y,
            );
            curve.contains(x).then(|| (distance_to_boundary(x, curve), x))
        })
        .collect();
    if grid.is_empty() {
        return Err(Error::NoInteriorPoint);
    }
    grid.sort_by(|a, b| b.0.total_cmp(&a.0));
    let step = 0.5 * cell.x.min(cell.y);
    let refined = grid
        .iter()
        .take(4)
        .map(|&(d0, x0)| {
            let res = minimize(
                |v| {
                    let x = Vec2::new(v[0], v[1]);
                    if curve.contains(x) {
                        -distance_to_boundary(x, curve)
                    } else {
                        f64::INFINITY
                    }
                },
                &[x0.x, x0.y],
                step,
                SimplexOptions {
                    max_evals: 800,
                    f_tol: 1e-16,
                    x_tol: 1e-13 * curve.length,
                },
            );
            if -res.value >= d0 {
                (-res.value, Vec2::new(res.x[0], res.x[1]))
            } else {
                (d0, x0)
            }
        })
        .fold(
            (f64::NEG_INFINITY, Vec2::ZERO),
            |acc, v| if v.0 > acc.0 { v } else { acc },
        );
    Ok(refined)
}

/// The unpruned offset trace `s -> gamma(s) + t n(s)`.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaCurve {
    pub t: f64,
    pub points: Vec<Vec2>,
    /// `int |1 - t kappa| ds`.
    pub length: f64,
}

pub fn alpha_curve(curve: &SampledCurve, t: f64) -> AlphaCurve {
    let points = (0..curve.n).map(|i| curve.frame(i).offset(t)).collect();
    let length = curve.curvatures.iter().map(|k| (1.0 - t * k).abs()).sum::<f64>() * curve.spacing();
    AlphaCurve { t, points, length }
}

/// Largest `t` found by bisection on `[0, r_i]` such that the offset map is
/// injective at depth `t`: `t kappa_max < 1` and the offset trace is simple.
pub fn t_star_estimate(curve: &SampledCurve, inradius: f64) -> f64 {
    let kappa_max = curve.kappa_max();
    let tol = 1e-12 * curve.length;
    let injective = |tau: f64| tau * kappa_max < 1.0 && polyline_is_simple(&alpha_curve(curve, tau).points, true, tol);
    if injective(inradius) {
        return inradius;
    }
    let (mut lo, mut hi) = (0.0, inradius);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if injective(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// One active parameter interval `[a, b]` with `0 <= a < L` and `b` possibly
/// past `L` when the interval wraps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b <= self.a
    }
}

/// The inner parallel set at one depth.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelSet {
    pub t: f64,
    /// Boundary length `L`.
    pub boundary_length: f64,
    /// Active intervals in cyclic order of their start.
    pub intervals: Vec<Interval>,
    /// Offset arcs, one per interval, with `ds` quadrature weights.
    pub arcs: Vec<ArcPiece>,
    /// `(p_k, q_k)`: offset images of `a_k` and `b_k`.
    pub endpoints: Vec<(Vec2, Vec2)>,
    /// Interval indices of each closed loop, in traversal order.
    pub components: Vec<Vec<usize>>,
    /// `sum_k (b_k - a_k) - t int_{a_k}^{b_k} kappa ds`.
    pub length: f64,
    pub regular: bool,
    pub empty: bool,
}

impl ParallelSet {
    fn empty(t: f64, boundary_length: f64, regular: bool) -> Self {
        Self {
            t,
            boundary_length,
            intervals: Vec::new(),
            arcs: Vec::new(),
            endpoints: Vec::new(),
            components: Vec::new(),
            length: 0.0,
            regular,
            empty: true,
        }
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// True when the whole boundary is active (no pruning).
    pub fn is_full_period(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].closed
    }

    /// The arcs as a (generally disconnected) trace.
    pub fn trace(&self) -> Trace {
        Trace::new(self.arcs.iter().cloned().map(Piece::Arc).collect())
    }

    /// The arcs of one component as a trace.
    pub fn component_trace(&self, component: usize) -> Trace {
        Trace::new(
            self.components[component]
                .iter()
                .map(|&k| Piece::Arc(self.arcs[k].clone()))
                .collect(),
        )
    }

    /// Reflection test through the origin on the arc samples.
    pub fn is_centrally_symmetric(&self, spacing: f64, tol: f64) -> bool {
        self.trace().is_centrally_symmetric(spacing, tol)
    }
}

/// A sampled simple closed curve together with its in-radius and tolerances.
#[derive(Debug, Clone)]
pub struct Domain {
    curve: SampledCurve,
    inradius: f64,
    incenter: Vec2,
    tol: Tolerances,
}

impl Domain {
    pub fn new(curve: SampledCurve) -> Result<Self> {
        let (inradius, incenter) = inradius(&curve)?;
        let tol = Tolerances::for_curve(&curve);
        Ok(Self {
            curve,
            inradius,
            incenter,
            tol,
        })
    }

    pub fn from_spec(spec: &ClosedCurveSpec, n: usize) -> Result<Self> {
        Self::new(sample(spec, n)?)
    }

    pub fn curve(&self) -> &SampledCurve {
        &self.curve
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn incenter(&self) -> Vec2 {
        self.incenter
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn distance(&self, x: Vec2) -> f64 {
        distance_to_boundary(x, &self.curve)
    }

    pub fn alpha_curve(&self, t: f64) -> AlphaCurve {
        alpha_curve(&self.curve, t)
    }

    pub fn t_star(&self) -> f64 {
        t_star_estimate(&self.curve, self.inradius)
    }

    /// `steps` depths `(j + 1/2) r_i / steps`, avoiding both `0` and `r_i`.
    pub fn sweep_grid(&self, steps: usize) -> Vec<f64> {
        (0..steps)
            .map(|j| (j as f64 + 0.5) * self.inradius / steps as f64)
            .collect()
    }

    /// Distance from the offset point at arc length `s`.
    fn offset_rho(&self, s: f64, t: f64) -> f64 {
        self.distance(self.curve.frame_at(s).offset(t))
    }

    /// Bisection between an inactive parameter `off` and an active one `on`.
    fn refine_endpoint(&self, mut off: f64, mut on: f64, t: f64, slack: f64) -> f64 {
        for _ in 0..ENDPOINT_BISECTIONS {
            let mid = 0.5 * (off + on);
            if self.offset_rho(mid, t) >= t - slack {
                on = mid;
            } else {
                off = mid;
            }
        }
        0.5 * (off + on)
    }

    pub fn parallel_set(&self, t: f64) -> Result<ParallelSet> {
        let curve = &self.curve;
        let tol = self.tol;
        let l = curve.length;
        if !(t >= 0.0) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                reason: "depth must be non-negative".into(),
            });
        }
        if t > self.inradius + tol.dist {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                reason: format!("exceeds the in-radius {:.9}", self.inradius),
            });
        }

        let n = curve.n;
        let h = curve.spacing();
        let rho: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| self.distance(curve.frame(i).offset(t)))
            .collect();
        let active = |slack: f64| -> Vec<bool> { rho.iter().map(|&r| r >= t - slack).collect() };

        let base = active(tol.activity);
        let runs = cyclic_runs(&base);
        if runs.is_empty() {
            let at_edge = t >= self.inradius - tol.dist;
            return Ok(ParallelSet::empty(t, l, at_edge));
        }
        if runs.len() == 1 && runs[0].1 == n {
            let frames: Vec<_> = (0..n).map(|i| curve.frame(i)).collect();
            let arc = ArcPiece {
                points: frames.iter().map(|f| f.offset(t)).collect(),
                weights: frames.iter().map(|f| h * (1.0 - t * f.curvature)).collect(),
                closed: true,
            };
            let p = arc.points[0];
            return Ok(ParallelSet {
                t,
                boundary_length: l,
                intervals: vec![Interval { a: 0.0, b: l }],
                arcs: vec![arc],
                endpoints: vec![(p, p)],
                components: vec![vec![0]],
                length: l - t * curve.integrate_curvature(0.0, l),
                regular: true,
                empty: false,
            });
        }

        let stable_counts = [0.5, 2.0]
            .iter()
            .all(|&f| cyclic_runs(&active(f * tol.activity)).len() == runs.len());
        let gaps = cyclic_runs(&base.iter().map(|a| !a).collect::<Vec<_>>());
        let mut regular =
            stable_counts && runs.iter().all(|&(_, len)| len >= 2) && gaps.iter().all(|&(_, len)| len >= 2);

        let mut intervals = Vec::with_capacity(runs.len());
        for &(start, len) in &runs {
            let on_a = curve.s[start];
            let on_b = on_a + (len - 1) as f64 * h;
            let mut a = self.refine_endpoint(on_a - h, on_a, t, tol.activity);
            let mut b = self.refine_endpoint(on_b + h, on_b, t, tol.activity);
            let a_half = self.refine_endpoint(on_a - h, on_a, t, 0.5 * tol.activity);
            let b_half = self.refine_endpoint(on_b + h, on_b, t, 0.5 * tol.activity);
            if (a - a_half).abs() >= tol.join || (b - b_half).abs() >= tol.join {
                regular = false;
            }
            if a < 0.0 {
                a += l;
                b += l;
            }
            intervals.push(Interval { a, b });
        }
        intervals.sort_by(|x, y| x.a.total_cmp(&y.a));

        let mut arcs = Vec::with_capacity(intervals.len());
        let mut endpoints = Vec::with_capacity(intervals.len());
        let mut length = 0.0;
        for iv in &intervals {
            let arc = sample_arc(curve, *iv, t);
            endpoints.push((arc.points[0], *arc.points.last().expect("non-empty")));
            arcs.push(arc);
            length += iv.len() - t * curve.integrate_curvature(iv.a, iv.b);
        }

        let components = match close_components(&endpoints, tol.join) {
            Some(c) => c,
            None => {
                regular = false;
                Vec::new()
            }
        };

        Ok(ParallelSet {
            t,
            boundary_length: l,
            intervals,
            arcs,
            endpoints,
            components,
            length,
            regular,
            empty: false,
        })
    }
}

/// Builds the domain and evaluates `S_t` in one call.
pub fn parallel_set(curve: &SampledCurve, t: f64) -> Result<ParallelSet> {
    Domain::new(curve.clone())?.parallel_set(t)
}

/// Offset arc over one interval: composite 8-point Gauss-Legendre panels about
/// four samples wide, weights times `1 - t kappa`. The endpoints are stored
/// with zero weight so the arc starts at `p_k` and ends at `q_k`.
fn sample_arc(curve: &SampledCurve, iv: Interval, t: f64) -> ArcPiece {
    let rule = gauss8();
    let panels = ((iv.len() / (ARC_PANEL_SAMPLES * curve.spacing())).ceil() as usize).max(1);
    let width = iv.len() / panels as f64;
    let mut points = Vec::with_capacity(panels * rule.nodes.len() + 2);
    let mut weights = Vec::with_capacity(points.capacity());
    points.push(curve.frame_at(iv.a).offset(t));
    weights.push(0.0);
    for k in 0..panels {
        let lo = iv.a + k as f64 * width;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let f = curve.frame_at(lo + 0.5 * width * (x + 1.0));
            points.push(f.offset(t));
            weights.push(0.5 * width * w * (1.0 - t * f.curvature));
        }
    }
    points.push(curve.frame_at(iv.b).offset(t));
    weights.push(0.0);
    ArcPiece {
        points,
        weights,
        closed: false,
    }
}

/// Maximal cyclic runs of `true` as `(start, length)`, ordered by start.
fn cyclic_runs(active: &[bool]) -> Vec<(usize, usize)> {
    let n = active.len();
    if active.iter().all(|&a| a) {
        return vec![(0, n)];
    }
    let Some(first_off) = active.iter().position(|&a| !a) else {
        return Vec::new();
    };
    let mut runs = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (first_off + k) % n;
        if active[i] {
            let mut len = 0;
            while len < n && active[(i + len) % n] {
                len += 1;
            }
            runs.push((i, len));
            k += len;
        } else {
            k += 1;
        }
    }
    runs.sort_unstable();
    runs
}

/// Links each arc end `q_k` to the arc start `p_j` it meets and returns the
/// resulting cycles, or `None` when the matching is not a permutation.
fn close_components(endpoints: &[(Vec2, Vec2)], tol: f64) -> Option<Vec<Vec<usize>>> {
    let m = endpoints.len();
    let mut next = vec![usize::MAX; m];
    let mut taken = vec![false; m];
    for (k, &(_, q)) in endpoints.iter().enumerate() {
        let (j, d) = endpoints
            .iter()
            .enumerate()
            .map(|(j, &(p, _))| (j, p.distance(q)))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if d > tol || taken[j] {
            return None;
        }
        taken[j] = true;
        next[k] = j;
    }
    let mut seen = vec![false; m];
    let mut components = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            cycle.push(k);
            k = next[k];
        }
        components.push(cycle);
    }
    Some(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn runs_wrap_around() {
        let a = [true, true, false, false, true, false, true];
        assert_eq!(cyclic_runs(&a), vec![(4, 1), (6, 3)]);
        assert_eq!(cyclic_runs(&[true; 5]), vec![(0, 5)]);
        assert!(cyclic_runs(&[false; 5]).is_empty());
    }

    #[test]
    fn components_follow_endpoint_matching() {
        let p = |x: f64| Vec2::new(x, 0.0);
        // Arc 0 ends where arc 2 starts, arc 2 ends where arc 0 starts; arc 1 closes on itself.
        let ends = [(p(0.0), p(2.0)), (p(5.0), p(5.0)), (p(2.0), p(0.0))];
        assert_eq!(close_components(&ends, 1e-9).unwrap(), vec![vec![0, 2], vec![1]]);
        let broken = [(p(0.0), p(1.0)), (p(3.0), p(4.0))];
        assert!(close_components(&broken, 1e-9).is_none());
    }

    #[test]
    fn disk_distances() {
        let c = sample(&ClosedCurveSpec::disk(1.0), 1024).unwrap();
        assert!((distance_to_boundary(Vec2::ZERO, &c) - 1.0).abs() < 1e-12);
        assert!(distance_to_boundary(Vec2::new(1.0, 0.0), &c) < 1e-12);
        assert!((distance_to_boundary(Vec2::new(0.3, -0.2), &c) - (1.0 - 0.13f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn disk_parallel_set_is_one_circle() {
        let d = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 1024).unwrap();
        assert!((d.inradius() - 1.0).abs() < 1e-9);
        let ps = d.parallel_set(0.4).unwrap();
        assert!(ps.regular && !ps.empty && ps.is_full_period());
        assert_eq!(ps.n_components(), 1);
        assert!((ps.length - TAU * 0.6).abs() < 1e-12);
        assert!((ps.trace().length() - TAU * 0.6).abs() < 1e-12);
    }

    #[test]
    fn depth_beyond_inradius_is_an_error() {
        let d = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 256).unwrap();
        assert!(matches!(d.parallel_set(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(d.parallel_set(-0.1), Err(Error::OutOfRange { .. })));
    }
}
