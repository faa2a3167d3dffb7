use std::f64::consts::TAU;

use isocurve::offset::distance_to_boundary;
use isocurve::vec2::point_segment_distance;
use isocurve::{parse_spec, sample, ClosedCurveSpec, Domain, Error, FourierSeries, Vec2};

/// Brute-force distance to a dense polygon through the exact curve.
struct DenseBoundary {
    points: Vec<Vec2>,
}

impl DenseBoundary {
    fn radial(series: &FourierSeries, m: usize) -> Self {
        let points = (0..m)
            .map(|i| {
                let theta = TAU * i as f64 / m as f64;
                Vec2::from_angle(theta) * series.value(theta)
            })
            .collect();
        Self { points }
    }

    fn distance(&self, x: Vec2) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| point_segment_distance(x, self.points[i], self.points[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn peanut() -> Domain {
    Domain::from_spec(&ClosedCurveSpec::peanut(1.0, 0.7), 4096).unwrap()
}

#[test]
fn inradius_and_injectivity_depth() {
    let ellipse = Domain::from_spec(&ClosedCurveSpec::ellipse(2.0, 1.0), 4096).unwrap();
    assert!((ellipse.inradius() - 1.0).abs() < 1e-8);
    assert!(ellipse.incenter().norm() < 1e-6);
    assert!((ellipse.t_star() - 0.5).abs() < 1e-6);

    let peanut = peanut();
    assert!((peanut.inradius() - 0.721_036_878_3).abs() < 1e-8);
    assert!((peanut.incenter().x.abs() - 0.874_39).abs() < 1e-4);
    assert!(peanut.t_star() < 1.0 / peanut.curve().kappa_max() + 1e-9);

    let disk = Domain::from_spec(&ClosedCurveSpec::disk(2.0), 1024).unwrap();
    assert!((disk.inradius() - 2.0).abs() < 1e-10);
    assert!((disk.t_star() - 2.0).abs() < 1e-8);
}

#[test]
fn alpha_length_below_the_injectivity_depth() {
    let d = Domain::from_spec(&ClosedCurveSpec::ellipse(2.0, 1.0), 4096).unwrap();
    let l = d.curve().length;
    for &t in &[0.1, 0.3, 0.45] {
        let alpha = d.alpha_curve(t);
        assert!((alpha.length - (l - TAU * t)).abs() < 1e-9, "t = {t}");
        let ps = d.parallel_set(t).unwrap();
        assert!(ps.is_full_period());
        assert!((ps.length - (l - TAU * t)).abs() < 1e-9);
    }
}

#[test]
fn disk_levels_are_circles() {
    let d = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 4096).unwrap();
    for t in d.sweep_grid(10) {
        let ps = d.parallel_set(t).unwrap();
        assert!(ps.regular && ps.n_components() == 1);
        assert!((ps.length - TAU * (1.0 - t)).abs() < 1e-12 * TAU);
        for x in &ps.arcs[0].points {
            assert!((x.norm() - (1.0 - t)).abs() < 1e-12);
        }
    }
}

#[test]
fn parallel_set_points_sit_at_depth_t() {
    let d = peanut();
    let series = FourierSeries::new(1.0, vec![0.0, 0.7], vec![]);
    let dense = DenseBoundary::radial(&series, 200_000);
    for &t in &[0.2, 0.5, 0.9 * d.inradius()] {
        let ps = d.parallel_set(t).unwrap();
        assert!(ps.regular);
        for arc in &ps.arcs {
            for x in arc.points.iter().step_by(7) {
                let rho = dense.distance(*x);
                assert!((rho - t).abs() < 1e-6, "t = {t}: rho = {rho}");
            }
        }
    }
}

#[test]
fn grid_oracle_membership() {
    let d = peanut();
    let t = 0.9 * d.inradius();
    let ps = d.parallel_set(t).unwrap();
    let trace = ps.trace();
    let spacing = d.curve().spacing();
    let (lo, hi) = d.curve().bounding_box();
    let m = 120;
    let cell = ((hi.x - lo.x) / m as f64).max((hi.y - lo.y) / m as f64);
    let mut hits = 0;
    for i in 0..=m {
        for j in 0..=m {
            let x = Vec2::new(lo.x + i as f64 * cell, lo.y + j as f64 * cell);
            if !d.curve().contains(x) {
                continue;
            }
            let rho = distance_to_boundary(x, d.curve());
            if (rho - t).abs() < 0.25 * cell {
                hits += 1;
                // the level set passes within a cell of every near-level grid point
                assert!(trace.distance_to(x, spacing) < cell, "{x:?}");
            }
        }
    }
    assert!(hits > 10);
}

#[test]
fn peanut_splits_into_two_components() {
    let d = peanut();
    assert_eq!(d.parallel_set(0.1).unwrap().n_components(), 1);
    for &t in &[0.35, 0.5, 0.7] {
        let ps = d.parallel_set(t).unwrap();
        assert!(ps.regular);
        assert_eq!(ps.n_components(), 2, "t = {t}");
    }
    let deep = d.parallel_set(0.7).unwrap();
    assert_eq!(deep.intervals.len(), 4);
    assert!(deep.is_centrally_symmetric(d.curve().spacing(), 1e-6));
}

#[test]
fn depths_outside_the_domain_are_rejected() {
    let d = peanut();
    assert!(matches!(d.parallel_set(-0.1), Err(Error::OutOfRange { .. })));
    assert!(matches!(d.parallel_set(1.0), Err(Error::OutOfRange { .. })));
}

#[test]
fn square_levels() {
    let spec = parse_spec(r#"{"kind":"polyline","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}"#).unwrap();
    let d = Domain::new(sample(&spec, 4096).unwrap()).unwrap();
    assert!((d.inradius() - 1.0).abs() < 1e-6);
    let ps = d.parallel_set(0.5).unwrap();
    assert_eq!(ps.n_components(), 1);
    assert!(ps.regular);
    assert!((ps.length - 4.0).abs() < 1e-6, "{}", ps.length);
}

#[test]
fn l_shape_levels_include_the_reflex_arc() {
    let spec = parse_spec(r#"{"kind":"polyline","vertices":[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#).unwrap();
    let d = Domain::new(sample(&spec, 4096).unwrap()).unwrap();
    assert!((d.inradius() - (2.0 - 2f64.sqrt())).abs() < 1e-6);
    for &t in &[0.1, 0.2, 0.3, 0.4] {
        let ps = d.parallel_set(t).unwrap();
        // five convex corners cut 2t each; the reflex corner adds a quarter circle
        let exact = 8.0 - 10.0 * t + 0.25 * TAU * t;
        assert!(ps.regular && ps.n_components() == 1);
        assert!((ps.length - exact).abs() < 1e-6, "t = {t}: {}", ps.length);
    }
}
