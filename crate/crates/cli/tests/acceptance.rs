//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::Instant;

use isocurve::cover::{build_cover, verify_cover_bound, verify_hartman_refined};
use isocurve::fuglede::{
    doubly_covered_segment_value, expansion_check, fuglede_functional, fuglede_parseval, log_grid,
    normalized_functional_trace, optimize_cp, sin2_family, OptimizeOptions, RadialProfile,
};
use isocurve::moment::{domain_moment, moment_report, moment_tolerance, wirtinger_check};
use isocurve::winding::{
    belt_arc, curvature_winding_identity, geometric_inequality_check, winding_number, OpenArc, BELT_CENTERS,
    BELT_RADIUS,
};
use isocurve::{sample, ClosedCurveSpec, Domain, FourierSeries, SampledCurve, Trace, Vec2};
use isocurve_cli::sweep;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_radial(rng: &mut impl Rng, max_modes: usize) -> ClosedCurveSpec {
    let modes = rng.gen_range(1..=max_modes);
    let budget = 0.6 / modes as f64;
    ClosedCurveSpec::FourierRadial {
        a0: 1.0,
        cos_coeffs: (0..modes).map(|_| rng.gen_range(-budget..budget)).collect(),
        sin_coeffs: (0..modes).map(|_| rng.gen_range(-budget..budget)).collect(),
    }
}

fn disk_exactness() -> Outcome {
    let d = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 4096).map_err(|e| e.to_string())?;
    let grid = sweep::grid(0.0, 0.95, 50);
    let levels = sweep::run_sweep(&d, &grid, 2.0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for level in &levels {
        let row = &level.row;
        let t = row.t;
        ensure(row.regular, || format!("t = {t} irregular"))?;
        let len = TAU * (1.0 - t);
        let m2 = TAU * (1.0 - t).powi(3);
        let moment = row.moment_p.unwrap();
        ensure((row.len_st - len).abs() <= 1e-7 * len, || format!("length at t = {t}"))?;
        ensure((moment - m2).abs() <= 1e-7 * m2, || format!("moment at t = {t}"))?;
        for margin in [row.hartman_margin, row.cover_margin, row.moment_margin] {
            let m = margin.unwrap();
            worst = worst.max(m.abs());
            ensure(m.abs() <= 1e-7, || format!("margin {m:e} at t = {t}"))?;
        }
    }
    Ok(format!("{} levels, max |margin| {worst:.1e}", levels.len()))
}

fn total_curvature() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let curve = sample(&random_radial(&mut rng, 6), 4096).map_err(|e| e.to_string())?;
        worst = worst.max((curve.total_curvature() - TAU).abs());
    }
    ensure(worst <= 1e-6, || format!("max error {worst:e}"))?;
    Ok(format!("20 curves, max |total - 2 pi| {worst:.1e}"))
}

fn hartman_and_cover() -> Outcome {
    let d = Domain::from_spec(&ClosedCurveSpec::peanut(1.0, 0.7), 4096).map_err(|e| e.to_string())?;
    let curve = d.curve();
    let tol = 1e-5 * curve.length;
    let (mut regular, mut split) = (0, 0);
    let mut min_excess = f64::INFINITY;
    for t in d.sweep_grid(50) {
        let ps = d.parallel_set(t).map_err(|e| e.to_string())?;
        if !ps.regular || ps.empty {
            continue;
        }
        regular += 1;
        let bound = curve.length - TAU * t;
        let cover = build_cover(&ps, curve).map_err(|e| e.to_string())?;
        let report = verify_cover_bound(&cover, curve);
        ensure(ps.length <= bound + tol, || format!("|S_t| above bound at t = {t}"))?;
        ensure(cover.length <= bound + tol && report.passed, || {
            format!("cover above bound at t = {t}")
        })?;
        let hart = verify_hartman_refined(&ps).map_err(|e| e.to_string())?;
        if hart.n_components == 2 {
            split += 1;
            let dist = hart.component_distances[0];
            // the plain margin leaves room for both component distances
            let excess = hart.plain_margin - (2.0 * dist - 1e-4);
            min_excess = min_excess.min(excess);
            ensure(excess >= 0.0, || format!("plain margin below 2 dist at t = {t}"))?;
            ensure(hart.refined_margin >= -tol, || {
                format!("refined bound fails at t = {t}")
            })?;
        }
    }
    ensure(split > 0, || "no two-component level".into())?;
    Ok(format!(
        "{regular} regular levels, {split} with two components, min slack over 2 dist {min_excess:.3e}"
    ))
}

fn moment_inequality() -> Outcome {
    let mut summary = Vec::new();
    for (name, spec) in [
        ("ellipse", ClosedCurveSpec::ellipse(2.0, 1.0)),
        ("peanut", ClosedCurveSpec::peanut(1.0, 0.7)),
    ] {
        let d = Domain::from_spec(&spec, 4096).map_err(|e| e.to_string())?;
        let l = d.curve().length;
        let mut checked = 0;
        let mut min_ratio = f64::INFINITY;
        for t in d.sweep_grid(50) {
            let ps = d.parallel_set(t).map_err(|e| e.to_string())?;
            if !ps.regular || ps.empty {
                continue;
            }
            for p in [0.5, 1.0, 2.0] {
                let r = moment_report(&d, &ps, p, Vec2::ZERO).map_err(|e| e.to_string())?;
                let floor = moment_tolerance(l, p);
                min_ratio = min_ratio.min(r.margin / floor);
                ensure(r.margin > floor, || {
                    format!("{name} p = {p} t = {t}: margin {:e}", r.margin)
                })?;
                ensure(r.condition_passed, || format!("{name} condition fails at t = {t}"))?;
                checked += 1;
            }
        }
        summary.push(format!("{name} {checked} checks (min margin {min_ratio:.0}x floor)"));
    }
    Ok(summary.join(", "))
}

fn wirtinger() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..100 {
        let curve: SampledCurve = if k % 2 == 0 {
            sample(&random_radial(&mut rng, 6), 1024).map_err(|e| e.to_string())?
        } else {
            // closed but not necessarily simple
            let modes = rng.gen_range(1..=4);
            let mut series = || {
                FourierSeries::new(
                    rng.gen_range(-1.0..1.0),
                    (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                )
            };
            let spec = ClosedCurveSpec::FourierXy {
                x: series(),
                y: series(),
            };
            SampledCurve::sample_unchecked(&spec, 2048).map_err(|e| e.to_string())?
        };
        let w = wirtinger_check(&Trace::from_curve(&curve)).map_err(|e| e.to_string())?;
        let slack = (w.lhs - w.rhs) / w.length.powi(3);
        worst = worst.max(slack);
        ensure(slack <= 1e-8, || format!("curve {k}: lhs - rhs = {slack:e} L^3"))?;
    }
    let circle = sample(&ClosedCurveSpec::disk(1.3), 4096).map_err(|e| e.to_string())?;
    let w = wirtinger_check(&Trace::from_curve(&circle)).map_err(|e| e.to_string())?;
    let gap = (w.lhs - w.rhs).abs();
    ensure(gap <= 1e-8, || format!("circle gap {gap:e}"))?;
    Ok(format!(
        "100 curves, max (lhs - rhs)/L^3 {worst:.2e}; circle gap {gap:.1e}"
    ))
}

fn fuglede() -> Outcome {
    let r = RadialProfile::sin2();
    let grid = log_grid(1e-3, 8e-3, 6);
    let mut fits = Vec::new();
    for p in [2.0, 2.5, 3.0, 3.5, 4.0] {
        let f = fuglede_functional(&r, p);
        let parseval = fuglede_parseval(&r, p);
        ensure((f - (p - 3.0) * PI).abs() <= 1e-9, || format!("F at p = {p}: {f}"))?;
        ensure((f - parseval).abs() <= 1e-8 * (1.0 + parseval.abs()), || {
            format!("Parseval at p = {p}")
        })?;
        let report = expansion_check(&r, p, &grid, 4096).map_err(|e| e.to_string())?;
        let fitted = report.fitted_quadratic_coeff;
        if p == 3.0 {
            // F vanishes, so the band is taken relative to the p = 4 scale p pi / 2
            let band = 0.02 * p * PI / 2.0;
            ensure(fitted.abs() <= band, || format!("p = 3 fit {fitted:e}"))?;
            fits.push(format!("p=3 c2={fitted:.1e}"));
        } else {
            ensure(report.relative_error <= 0.02, || {
                format!("p = {p}: fit {fitted} vs {}", report.expected_coeff)
            })?;
            fits.push(format!("p={p} {:.2}%", 100.0 * report.relative_error));
        }
    }
    Ok(format!("F = (p-3) pi to 1e-9; fits {}", fits.join(" ")))
}

fn symmetry_breaking() -> Outcome {
    let high = sin2_family(4.0, 5, 0.02, 4096).map_err(|e| e.to_string())?;
    let low = sin2_family(2.0, 5, 0.02, 4096).map_err(|e| e.to_string())?;
    ensure(high.iter().all(|e| e.j_p > 1.0), || format!("p = 4: {high:?}"))?;
    ensure(low.iter().all(|e| e.j_p < 1.0), || format!("p = 2: {low:?}"))?;
    Ok(format!(
        "p=4 J-1 from {:.2e} to {:.2e}; p=2 J-1 from {:.2e} to {:.2e}",
        high[0].j_p - 1.0,
        high[4].j_p - 1.0,
        low[0].j_p - 1.0,
        low[4].j_p - 1.0
    ))
}

fn doubly_covered_segment() -> Outcome {
    let trace = Trace::doubly_covered_segment(1.0);
    let mut values = Vec::new();
    for (p, above_one) in [(3.0, false), (4.0, true), (7.0, true)] {
        let j = normalized_functional_trace(&trace, p).map_err(|e| e.to_string())?;
        let exact = doubly_covered_segment_value(p);
        ensure((j - exact).abs() <= 1e-9, || format!("p = {p}: {j} vs {exact}"))?;
        ensure((j > 1.0) == above_one, || format!("p = {p}: wrong side of 1"))?;
        values.push(format!("J_{p}={j:.6}"));
    }
    Ok(values.join(" "))
}

fn optimizer() -> Outcome {
    let run = |p| {
        optimize_cp(OptimizeOptions {
            p,
            n_modes: 4,
            restarts: 20,
            budget: 2000,
            seed: 7,
        })
        .map_err(|e| e.to_string())
    };
    let low = run(2.0)?.best_j;
    let high = run(4.0)?.best_j;
    ensure(low <= 1.0 + 1e-4, || format!("p = 2 best {low}"))?;
    ensure(high > 1.0, || format!("p = 4 best {high}"))?;
    Ok(format!(
        "p=2 best_J {low:.10}, p=4 best_J {high:.6} (lower bounds on C_p)"
    ))
}

fn winding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut arcs, mut worst_identity, mut worst_add) = (0, 0.0f64, 0.0f64);
    while arcs < 50 {
        let curve = sample(&random_radial(&mut rng, 5), 2048).map_err(|e| e.to_string())?;
        let s1 = rng.gen_range(0.0..curve.length);
        let span = rng.gen_range(0.2..0.8) * curve.length;
        let arc = OpenArc::from_curve(&curve, s1, s1 + span, 4001).map_err(|e| e.to_string())?;
        if !arc.simple {
            continue;
        }
        arcs += 1;
        let (lhs, rhs) = curvature_winding_identity(&arc).map_err(|e| e.to_string())?;
        worst_identity = worst_identity.max((lhs - rhs).abs());
        let (a, b) = arc
            .split_at(rng.gen_range(1..arc.len() - 1))
            .map_err(|e| e.to_string())?;
        let x0 = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if let (Ok(w), Ok(wa), Ok(wb)) = (winding_number(&arc, x0), winding_number(&a, x0), winding_number(&b, x0)) {
            worst_add = worst_add.max((w.value - wa.value - wb.value).abs());
        }
    }
    ensure(worst_identity <= 1e-5, || format!("identity error {worst_identity:e}"))?;
    ensure(worst_add <= 1e-9, || format!("additivity error {worst_add:e}"))?;

    let (c1, c2) = BELT_CENTERS;
    let seg = OpenArc::segment(Vec2::new(0.0, -1.0), Vec2::new(3.0, -1.0), 101).map_err(|e| e.to_string())?;
    let tight = geometric_inequality_check(&seg, c1, c2, BELT_RADIUS).map_err(|e| e.to_string())?;
    ensure(tight.margin.abs() <= 1e-9, || {
        format!("segment margin {:e}", tight.margin)
    })?;
    let mut min_margin = f64::INFINITY;
    for _ in 0..50 {
        let amps = [
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
        ];
        let arc = belt_arc(amps, rng.gen_range(0.0..6.0), 3001).map_err(|e| e.to_string())?;
        let r = geometric_inequality_check(&arc, c1, c2, BELT_RADIUS).map_err(|e| e.to_string())?;
        min_margin = min_margin.min(r.margin);
    }
    ensure(min_margin >= -1e-6, || format!("belt margin {min_margin:e}"))?;
    Ok(format!(
        "identity err {worst_identity:.1e}, additivity err {worst_add:.1e}, segment margin {:.1e}, min belt margin {min_margin:.3}",
        tight.margin
    ))
}

fn domain_moments() -> Outcome {
    let disk = Domain::from_spec(&ClosedCurveSpec::disk(1.0), 4096).map_err(|e| e.to_string())?;
    let m = domain_moment(&disk).map_err(|e| e.to_string())?;
    let exact = PI / 2.0;
    ensure(
        (m.direct - exact).abs() <= 1e-6 && (m.coarea - exact).abs() <= 1e-6,
        || format!("disk: {m:?}"),
    )?;
    let peanut = Domain::from_spec(&ClosedCurveSpec::peanut(1.0, 0.7), 4096).map_err(|e| e.to_string())?;
    let p = domain_moment(&peanut).map_err(|e| e.to_string())?;
    let rel = (p.direct - p.coarea).abs() / p.direct;
    ensure(rel <= 5e-3, || format!("peanut paths differ by {rel:e}"))?;
    ensure(p.direct <= p.disk_bound && p.coarea <= p.disk_bound, || {
        format!("peanut above bound: {p:?}")
    })?;
    Ok(format!(
        "disk err {:.1e}; peanut direct {:.6} coarea {:.6} ({:.3}%), bound {:.4}",
        (m.coarea - exact).abs().max((m.direct - exact).abs()),
        p.direct,
        p.coarea,
        100.0 * rel,
        p.disk_bound
    ))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_isocurve"))
            .args([
                "sweep",
                "--spec",
                r#"{"kind":"preset","name":"peanut","a0":1,"c2":0.7}"#,
                "--steps",
                "20",
                "--p",
                "1",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "sweep failed".into())?;
    ensure(a.stdout == b.stdout, || "CSV output differs between runs".into())?;
    Ok(format!("{} identical CSV bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("disk exactness", disk_exactness),
        ("total curvature", total_curvature),
        ("hartman and covering bound", hartman_and_cover),
        ("moment inequality", moment_inequality),
        ("wirtinger", wirtinger),
        ("fuglede functional", fuglede),
        ("symmetry breaking", symmetry_breaking),
        ("doubly covered segment", doubly_covered_segment),
        ("optimizer sanity", optimizer),
        ("winding machinery", winding),
        ("domain moment", domain_moments),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
