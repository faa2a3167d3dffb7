//! Centroids and p-th moments of inner parallel sets, the moment inequality
//! against the disk, the Wirtinger step and the domain moment by co-area.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::build_cover;
use crate::curve::{ClosedCurveSpec, FourierSeries};
use crate::error::{Error, Result};
use crate::offset::{Domain, ParallelSet};
use crate::quadrature::gauss5;
use crate::trace::Trace;
use crate::vec2::Vec2;

/// Length-weighted mean position of a trace.
pub fn centroid(trace: &Trace) -> Result<Vec2> {
    trace.centroid()
}

/// `int |x - center|^p ds` over a trace, with multiplicity.
pub fn p_moment(trace: &Trace, p: f64, center: Vec2) -> f64 {
    trace.p_moment(p, center)
}

/// `2 pi (L / 2 pi - t)^(1 + p)`: the p-th moment of `S_t` for the disk with
/// the same perimeter.
pub fn disk_reference(length: f64, t: f64, p: f64) -> f64 {
    TAU * (length / TAU - t).powf(1.0 + p)
}

/// Scale-aware slack `1e-6 L^(p+1)` on moment margins.
pub fn moment_tolerance(length: f64, p: f64) -> f64 {
    1e-6 * length.powf(p + 1.0)
}

/// `(int |x - c|^2 ds, L^3 / 4 pi^2)` for a closed trace about its centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WirtingerPair {
    pub lhs: f64,
    pub rhs: f64,
    pub length: f64,
}

pub fn wirtinger_check(trace: &Trace) -> Result<WirtingerPair> {
    let length = trace.length();
    let gap = trace.closure_gap();
    if trace.pieces.is_empty() || gap > 1e-9 * (1.0 + length) {
        return Err(Error::NotClosed(gap));
    }
    let c = trace.centroid()?;
    Ok(WirtingerPair {
        lhs: trace.p_moment(2.0, c),
        rhs: length.powi(3) / (4.0 * PI * PI),
        length,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub t: f64,
    pub p: f64,
    pub n_components: usize,
    /// Centroid of `S_t`.
    pub centroid: Vec2,
    /// `int_{S_t} |x - c(t)|^p`.
    pub moment: f64,
    pub disk_reference: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Centroid of the covering curve, for diagnostics.
    pub cover_centroid: Vec2,
    pub wirtinger_lhs: f64,
    pub wirtinger_rhs: f64,
    /// `int_{S_t} |x - x0|^2` and `(L - 2 pi t)^3 / 4 pi^2` for the fixed center.
    pub condition_lhs: f64,
    pub condition_rhs: f64,
    pub condition_passed: bool,
}

/// Moment inequality at one regular level.
pub fn moment_report(domain: &Domain, ps: &ParallelSet, p: f64, x0: Vec2) -> Result<MomentReport> {
    let curve = domain.curve();
    let l = curve.length;
    let trace = ps.trace();
    let c = trace.centroid()?;
    let moment = trace.p_moment(p, c);
    let disk_reference = disk_reference(l, ps.t, p);
    let margin = disk_reference - moment;
    let tolerance = moment_tolerance(l, p);
    let cover = build_cover(ps, curve)?;
    let wirtinger = wirtinger_check(&cover.trace)?;
    let condition_lhs = trace.p_moment(2.0, x0);
    let condition_rhs = (l - TAU * ps.t).powi(3) / (4.0 * PI * PI);
    Ok(MomentReport {
        t: ps.t,
        p,
        n_components: ps.n_components(),
        centroid: c,
        moment,
        disk_reference,
        margin,
        tolerance,
        passed: margin >= -tolerance,
        cover_centroid: cover.trace.centroid()?,
        wirtinger_lhs: wirtinger.lhs,
        wirtinger_rhs: wirtinger.rhs,
        condition_lhs,
        condition_rhs,
        condition_passed: condition_lhs <= condition_rhs + moment_tolerance(l, 2.0),
    })
}

/// The fixed center for the `int_{S_t} |x - x0|^2` condition: the origin for
/// centrally symmetric curves, otherwise the centroid of `S_t` at the
/// smallest regular depth in `t_grid`.
pub fn condition_center(domain: &Domain, t_grid: &[f64]) -> Result<Vec2> {
    let curve = domain.curve();
    if curve.is_centrally_symmetric(domain.tolerances().dist) {
        return Ok(Vec2::ZERO);
    }
    let mut sorted = t_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    for t in sorted {
        let ps = domain.parallel_set(t)?;
        if ps.regular && !ps.empty {
            return ps.trace().centroid();
        }
    }
    Err(Error::IrregularLevel(t_grid.first().copied().unwrap_or(0.0)))
}

/// Evaluates the moment inequality for `p in (0, 2]` at every regular level of
/// `t_grid`; irregular and empty levels are skipped.
pub fn verify_isomom(domain: &Domain, t_grid: &[f64], p: f64) -> Result<Vec<MomentReport>> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            reason: "the moment inequality is established for 0 < p <= 2".into(),
        });
    }
    let x0 = condition_center(domain, t_grid)?;
    let reports: Vec<Option<MomentReport>> = t_grid
        .par_iter()
        .map(|&t| {
            let ps = domain.parallel_set(t)?;
            if !ps.regular || ps.empty {
                return Ok(None);
            }
            moment_report(domain, &ps, p, x0).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainMoment {
    /// `int_Omega |x|^2 dx` by a boundary formula.
    pub direct: f64,
    /// `int_0^{r_i} int_{S_t} |x|^2 dH^1 dt`.
    pub coarea: f64,
    /// `pi R^4 / 2` with `R = L / 2 pi`.
    pub disk_bound: f64,
    /// Depth nodes of the co-area quadrature that were not regular.
    pub irregular_levels: Vec<f64>,
}

/// Number of Gauss-Legendre panels on `[0, r_i]` for the co-area integral.
const COAREA_PANELS: usize = 10;

/// `int_Omega |x|^2 dx` two ways. The direct value is `1/4 int r^4 dtheta` for
/// radial specs and the boundary integral `1/3 oint x^3 dy - y^3 dx` otherwise.
/// The co-area value integrates the second moment of `S_t` about the origin
/// over depth; a non-regular node is replaced by the mean of two nearby depths.
pub fn domain_moment(domain: &Domain) -> Result<DomainMoment> {
    let curve = domain.curve();
    let direct = match curve.spec() {
        ClosedCurveSpec::FourierRadial {
            a0,
            cos_coeffs,
            sin_coeffs,
        } => {
            let series = FourierSeries::new(*a0, cos_coeffs.clone(), sin_coeffs.clone());
            let m = (16 * series.max_mode()).max(256);
            let h = TAU / m as f64;
            0.25 * h * (0..m).map(|i| series.value(i as f64 * h).powi(4)).sum::<f64>()
        }
        _ => {
            curve
                .points
                .iter()
                .zip(&curve.tangents)
                .map(|(x, tan)| x.x.powi(3) * tan.y - x.y.powi(3) * tan.x)
                .sum::<f64>()
                * curve.spacing()
                / 3.0
        }
    };

    let r_i = domain.inradius();
    let rule = gauss5();
    let width = r_i / COAREA_PANELS as f64;
    let nodes: Vec<(f64, f64)> = (0..COAREA_PANELS)
        .flat_map(|k| {
            let lo = k as f64 * width;
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(move |(x, w)| (lo + 0.5 * width * (x + 1.0), 0.5 * width * w))
        })
        .collect();
    let shift = 1e-3 * r_i;
    let values: Vec<(f64, bool)> = nodes
        .par_iter()
        .map(|&(t, _)| {
            let ps = domain.parallel_set(t)?;
            if ps.regular || ps.empty {
                return Ok((level_moment(&ps), true));
            }
            let below = domain.parallel_set((t - shift).max(0.0))?;
            let above = domain.parallel_set((t + shift).min(r_i))?;
            Ok((0.5 * (level_moment(&below) + level_moment(&above)), false))
        })
        .collect::<Result<_>>()?;
    let coarea = nodes.iter().zip(&values).map(|(&(_, w), &(v, _))| w * v).sum();
    let irregular_levels = nodes
        .iter()
        .zip(&values)
        .filter(|(_, v)| !v.1)
        .map(|(n, _)| n.0)
        .collect();
    let radius = curve.length / TAU;
    Ok(DomainMoment {
        direct,
        coarea,
        disk_bound: PI * radius.powi(4) / 2.0,
        irregular_levels,
    })
}

fn level_moment(ps: &ParallelSet) -> f64 {
    if ps.empty {
        0.0
    } else {
        ps.trace().p_moment(2.0, Vec2::ZERO)
    }
}
