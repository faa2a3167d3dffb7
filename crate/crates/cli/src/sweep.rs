use std::fmt::Write as _;

use isocurve::cover::{build_cover, verify_cover_bound, verify_hartman_refined};
use isocurve::moment::{condition_center, moment_report, moment_tolerance};
use isocurve::{Domain, Result, Vec2};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::Record;

pub const CSV_HEADER: &str = "t,regular,n_components,len_St,hartman_margin,refined_margin,cover_len,cover_margin,centroid_x,centroid_y,moment_p,disk_ref,moment_margin,wirtinger_lhs,wirtinger_rhs";

/// One CSV row. Irregular levels only fill `t`, `regular`, `n_components`
/// and `len_St`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub regular: bool,
    pub n_components: usize,
    pub len_st: f64,
    pub hartman_margin: Option<f64>,
    pub refined_margin: Option<f64>,
    pub cover_len: Option<f64>,
    pub cover_margin: Option<f64>,
    pub centroid: Option<Vec2>,
    pub moment_p: Option<f64>,
    pub disk_ref: Option<f64>,
    pub moment_margin: Option<f64>,
    pub wirtinger_lhs: Option<f64>,
    pub wirtinger_rhs: Option<f64>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:?}"));
        let mut line = format!("{:?},{},{},{:?}", self.t, self.regular, self.n_components, self.len_st);
        for v in [
            self.hartman_margin,
            self.refined_margin,
            self.cover_len,
            self.cover_margin,
            self.centroid.map(|c| c.x),
            self.centroid.map(|c| c.y),
            self.moment_p,
            self.disk_ref,
            self.moment_margin,
            self.wirtinger_lhs,
            self.wirtinger_rhs,
        ] {
            let _ = write!(line, ",{}", opt(v));
        }
        line
    }
}

pub struct Level {
    pub row: SweepRow,
    pub records: Vec<Record>,
}

/// `steps` depths at half-step offsets inside `(t_min, t_max)`.
pub fn grid(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    let h = (t_max - t_min) / steps as f64;
    (0..steps).map(|j| t_min + (j as f64 + 0.5) * h).collect()
}

pub fn run_sweep(domain: &Domain, grid: &[f64], p: f64) -> Result<Vec<Level>> {
    let x0 = condition_center(domain, grid)?;
    grid.par_iter().map(|&t| level(domain, t, p, x0)).collect()
}

fn level(domain: &Domain, t: f64, p: f64, x0: Vec2) -> Result<Level> {
    let curve = domain.curve();
    let ps = domain.parallel_set(t)?;
    let mut row = SweepRow {
        t,
        regular: ps.regular && !ps.empty,
        n_components: ps.n_components(),
        len_st: ps.length,
        ..SweepRow::default()
    };
    if !row.regular {
        let record = Record::info(format!("level t={t}"), ps.length).at_level(false);
        return Ok(Level {
            row,
            records: vec![record],
        });
    }
    let cover = build_cover(&ps, curve)?;
    let bound = verify_cover_bound(&cover, curve);
    let hartman = verify_hartman_refined(&ps)?;
    let moment = moment_report(domain, &ps, p, x0)?;
    let cover_l = cover.length;
    row.hartman_margin = Some(hartman.plain_margin);
    row.refined_margin = Some(hartman.refined_margin);
    row.cover_len = Some(cover_l);
    row.cover_margin = Some(bound.margin);
    row.centroid = Some(moment.centroid);
    row.moment_p = Some(moment.moment);
    row.disk_ref = Some(moment.disk_reference);
    row.moment_margin = Some(moment.margin);
    row.wirtinger_lhs = Some(moment.wirtinger_lhs);
    row.wirtinger_rhs = Some(moment.wirtinger_rhs);

    let l = curve.length;
    let records = vec![
        Record::check(
            format!("hartman t={t}"),
            ps.length,
            hartman.bound,
            hartman.plain_margin,
            hartman.tolerance,
        ),
        Record::check(
            format!("refined_hartman t={t}"),
            ps.length + hartman.distance_sum,
            hartman.bound,
            hartman.refined_margin,
            hartman.tolerance,
        ),
        Record {
            passed: Some(bound.passed),
            ..Record::check(
                format!("cover_bound t={t}"),
                cover_l,
                bound.bound,
                bound.margin,
                bound.tolerance,
            )
        },
        Record::check(
            format!("moment_p t={t}"),
            moment.moment,
            moment.disk_reference,
            moment.margin,
            moment.tolerance,
        ),
        Record::check(
            format!("condition_x0 t={t}"),
            moment.condition_lhs,
            moment.condition_rhs,
            moment.condition_rhs - moment.condition_lhs,
            moment_tolerance(l, 2.0),
        ),
        Record::check(
            format!("wirtinger t={t}"),
            moment.wirtinger_lhs,
            moment.wirtinger_rhs,
            moment.wirtinger_rhs - moment.wirtinger_lhs,
            1e-8 * cover_l.powi(3),
        ),
    ]
    .into_iter()
    .map(|r| r.at_level(true))
    .collect();
    Ok(Level { row, records })
}

pub fn to_csv(levels: &[Level]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for level in levels {
        out.push_str(&level.row.to_csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irregular_rows_leave_checks_blank() {
        let row = SweepRow {
            t: 0.5,
            regular: false,
            n_components: 1,
            len_st: 2.0,
            ..SweepRow::default()
        };
        let line = row.to_csv();
        assert_eq!(line, "0.5,false,1,2.0,,,,,,,,,,,");
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn half_step_grid() {
        assert_eq!(grid(0.0, 1.0, 4), vec![0.125, 0.375, 0.625, 0.875]);
    }
}
