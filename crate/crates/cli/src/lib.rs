//! Batch verification runs over inner parallel curves: curve summaries,
//! depth sweeps with every inequality check, cover export and the moment
//! functional explorer.

pub mod export;
pub mod report;
pub mod sweep;

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use isocurve::cover::{build_cover, verify_cover_bound};
use isocurve::fuglede::{expansion_check, log_grid, optimize_cp, OptimizeOptions, RadialProfile};
use isocurve::{parse_spec, sample, ClosedCurveSpec, Domain};
use serde_json::{json, Value};
use thiserror::Error;

use report::{Provenance, Record, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] isocurve::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Report,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "isocurve",
    version,
    about = "Verify inner parallel curve inequalities on planar domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Length, total curvature, maximal curvature, in-radius and injectivity depth.
    CurveInfo {
        /// Curve document path, or an inline JSON document.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = isocurve::curve::DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every inequality check across a grid of depths.
    Sweep {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = isocurve::curve::DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the covering curve at one depth as a polyline CSV or an SVG overlay.
    CoverExport {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = isocurve::curve::DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Second-order expansion of the normalized moment around the circle.
    Fuglede {
        #[arg(long)]
        p: f64,
        /// `sin2` or a JSON document `{"mean":..,"cos_coeffs":[..],"sin_coeffs":[..]}`.
        #[arg(long, default_value = "sin2")]
        profile: String,
        #[arg(long, default_value_t = 1e-3)]
        eps_lo: f64,
        #[arg(long, default_value_t = 8e-3)]
        eps_hi: f64,
        #[arg(long, default_value_t = isocurve::curve::DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Searches symmetric radial curves for large normalized moments.
    Optimize {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 4)]
        modes: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced: the report and the primary output document.
pub struct Outcome {
    pub report: RunReport,
    pub output: String,
    pub out: Option<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_passed() {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

pub fn load_spec(source: &str) -> CliResult<ClosedCurveSpec> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        fs::read_to_string(source).map_err(|e| CliError::Io {
            path: source.into(),
            source: e,
        })?
    };
    Ok(parse_spec(&text)?)
}

fn parse_profile(source: &str) -> CliResult<RadialProfile> {
    if source == "sin2" {
        return Ok(RadialProfile::sin2());
    }
    serde_json::from_str(source).map_err(|e| CliError::Input(format!("profile: {e}")))
}

pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
    }
}

fn tolerances_json(domain: &Domain) -> Value {
    serde_json::to_value(domain.tolerances()).expect("tolerances serialize")
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::CurveInfo { spec, n, out } => curve_info(spec, *n, out.clone()),
        Command::Sweep {
            spec,
            n,
            t_min,
            t_max,
            steps,
            p,
            format,
            out,
        } => run_sweep(spec, *n, *t_min, *t_max, *steps, *p, *format, out.clone()),
        Command::CoverExport {
            spec,
            n,
            t,
            format,
            out,
        } => cover_export(spec, *n, *t, *format, out.clone()),
        Command::Fuglede {
            p,
            profile,
            eps_lo,
            eps_hi,
            n,
            out,
        } => fuglede(*p, profile, *eps_lo, *eps_hi, *n, out.clone()),
        Command::Optimize {
            p,
            modes,
            restarts,
            budget,
            seed,
            out,
        } => optimize(*p, *modes, *restarts, *budget, *seed, out.clone()),
    }
}

fn curve_info(spec_src: &str, n: usize, out: Option<PathBuf>) -> CliResult<Outcome> {
    let spec = load_spec(spec_src)?;
    let curve = sample(&spec, n)?;
    let domain = Domain::new(curve)?;
    let curve = domain.curve();
    let total = curve.total_curvature();
    let records = vec![
        Record::info("length", curve.length),
        Record::check("total_curvature", total, TAU, 1e-6 - (total - TAU).abs(), 0.0),
        Record::info("kappa_max", curve.kappa_max()),
        Record::info("inradius", domain.inradius()),
        Record::info("t_star", domain.t_star()),
        Record::info("simple", 1.0),
    ];
    let report = RunReport::new(
        "curve-info",
        json!({ "spec": spec, "n": n }),
        records,
        Provenance::new(Some(n), tolerances_json(&domain), None),
        json!({ "incenter": domain.incenter() }),
    );
    Ok(Outcome {
        output: report.to_json(),
        report,
        out,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    spec_src: &str,
    n: usize,
    t_min: Option<f64>,
    t_max: Option<f64>,
    steps: usize,
    p: f64,
    format: Format,
    out: Option<PathBuf>,
) -> CliResult<Outcome> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(CliError::Input(format!("--p {p} must lie in (0, 2]")));
    }
    if steps == 0 {
        return Err(CliError::Input("--steps must be positive".into()));
    }
    let spec = load_spec(spec_src)?;
    let domain = Domain::from_spec(&spec, n)?;
    let r_i = domain.inradius();
    let lo = t_min.unwrap_or(0.0);
    let hi = t_max.unwrap_or(r_i);
    if !(lo >= 0.0 && lo < hi && hi <= r_i) {
        return Err(CliError::Input(format!(
            "need 0 <= t_min < t_max <= r_i = {r_i}, got [{lo}, {hi}]"
        )));
    }
    let grid = sweep::grid(lo, hi, steps);
    let levels = sweep::run_sweep(&domain, &grid, p)?;
    if levels.iter().all(|l| !l.row.regular) {
        return Err(CliError::Input("no regular level on the grid".into()));
    }
    let csv = sweep::to_csv(&levels);
    let rows: Vec<_> = levels.iter().map(|l| &l.row).collect();
    let details = json!({ "rows": rows });
    let records = levels.iter().flat_map(|l| l.records.iter().cloned()).collect();
    let report = RunReport::new(
        "sweep",
        json!({ "spec": spec, "n": n, "t_min": lo, "t_max": hi, "steps": steps, "p": p }),
        records,
        Provenance::new(Some(n), tolerances_json(&domain), None),
        details,
    );
    let output = match format {
        Format::Csv => csv,
        Format::Report => report.to_json(),
        Format::Svg => return Err(CliError::Input("sweep writes csv or report".into())),
    };
    Ok(Outcome { report, output, out })
}

fn cover_export(spec_src: &str, n: usize, t: f64, format: Format, out: Option<PathBuf>) -> CliResult<Outcome> {
    let spec = load_spec(spec_src)?;
    let domain = Domain::from_spec(&spec, n)?;
    let ps = domain.parallel_set(t)?;
    let cover = build_cover(&ps, domain.curve())?;
    let segments: Vec<_> = cover.segments().map(|(_, a, b)| (a, b)).collect();
    let bound = verify_cover_bound(&cover, domain.curve());
    let records = vec![
        Record {
            passed: Some(bound.passed),
            ..Record::check("cover_bound", cover.length, bound.bound, bound.margin, bound.tolerance)
        },
        Record::info("n_components", ps.n_components() as f64),
        Record::info("n_segments", segments.len() as f64),
    ];
    let report = RunReport::new(
        "cover-export",
        json!({ "spec": spec, "n": n, "t": t }),
        records,
        Provenance::new(Some(n), tolerances_json(&domain), None),
        json!({ "segments": segments, "symmetric": cover.symmetric }),
    );
    let output = match format {
        Format::Csv => export::trace_csv(&cover.trace),
        Format::Svg => export::overlay_svg(domain.curve(), &ps, &cover),
        Format::Report => report.to_json(),
    };
    Ok(Outcome { report, output, out })
}

/// Relative band on the fitted quadratic coefficient.
const FIT_TOLERANCE: f64 = 0.02;
const EPS_POINTS: usize = 6;

fn fuglede(p: f64, profile: &str, eps_lo: f64, eps_hi: f64, n: usize, out: Option<PathBuf>) -> CliResult<Outcome> {
    let r = parse_profile(profile)?;
    let grid = log_grid(eps_lo, eps_hi, EPS_POINTS);
    let fr = expansion_check(&r, p, &grid, n)?;
    let agreement = 1e-8 * (1.0 + fr.f_parseval.abs());
    let band = FIT_TOLERANCE * fr.expected_coeff.abs();
    let records = vec![
        Record::check(
            "F_quadrature_vs_parseval",
            fr.f_quadrature,
            fr.f_parseval,
            agreement - (fr.f_quadrature - fr.f_parseval).abs(),
            0.0,
        ),
        Record::check(
            "fitted_quadratic_coeff",
            fr.fitted_quadratic_coeff,
            fr.expected_coeff,
            band - (fr.fitted_quadratic_coeff - fr.expected_coeff).abs(),
            0.0,
        ),
    ];
    let report = RunReport::new(
        "fuglede",
        json!({ "p": p, "profile": r, "eps_lo": eps_lo, "eps_hi": eps_hi, "n": n }),
        records,
        Provenance::new(Some(n), json!({ "fit_relative": FIT_TOLERANCE }), None),
        serde_json::to_value(&fr).expect("report serializes"),
    );
    Ok(Outcome {
        output: report.to_json(),
        report,
        out,
    })
}

fn optimize(
    p: f64,
    modes: usize,
    restarts: usize,
    budget: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> CliResult<Outcome> {
    let result = optimize_cp(OptimizeOptions {
        p,
        n_modes: modes,
        restarts,
        budget,
        seed,
    })?;
    let best = result.best_j;
    let record = if p <= 2.0 {
        // C_p = 1 here, so nothing may beat the circle
        Record::check("best_J_lower_bound", best, 1.0, 1.0 + 1e-4 - best, 0.0)
    } else if p > 3.0 {
        // the circle is not even a local maximizer
        Record {
            passed: Some(best > 1.0),
            ..Record::check("best_J_lower_bound", best, 1.0, best - 1.0, 0.0)
        }
    } else {
        Record {
            reference: Some(1.0),
            margin: Some(best - 1.0),
            ..Record::info("best_J_lower_bound (inconclusive)", best)
        }
    };
    let report = RunReport::new(
        "optimize",
        json!({ "p": p, "modes": modes, "restarts": restarts, "budget": budget, "seed": seed }),
        vec![record],
        Provenance::new(None, json!({ "min_radius": isocurve::fuglede::MIN_RADIUS }), Some(seed)),
        serde_json::to_value(&result).expect("result serializes"),
    );
    Ok(Outcome {
        output: report.to_json(),
        report,
        out,
    })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = write_output(outcome.out.as_deref(), &outcome.output) {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            let s = outcome.report.summary;
            eprintln!(
                "{}: {} checks, {} passed, {} failed",
                outcome.report.command, s.checks, s.passed, s.failed
            );
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
