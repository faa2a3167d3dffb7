//! Second-order expansion of the normalized moment functional around the
//! circle, the doubly covered segment witness and a simplex search for
//! large values of `J_p` over centrally symmetric radial curves.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{sample, ClosedCurveSpec, FourierSeries};
use crate::error::{Error, Result};
use crate::simplex::{minimize, SimplexOptions};
use crate::trace::Trace;
use crate::vec2::Vec2;

/// Upper bound on the number of even modes searched by [`optimize_cp`].
pub const MAX_MODES: usize = 12;

/// Profiles whose radius dips below this are rejected by the optimizer.
pub const MIN_RADIUS: f64 = 0.05;

/// Perturbation profile `r(theta) = mean + sum a_n cos n theta + b_n sin n theta`,
/// coefficients indexed from mode 1.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RadialProfile {
    #[serde(default)]
    pub mean: f64,
    #[serde(default)]
    pub cos_coeffs: Vec<f64>,
    #[serde(default)]
    pub sin_coeffs: Vec<f64>,
}

impl RadialProfile {
    pub fn new(mean: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        Self {
            mean,
            cos_coeffs,
            sin_coeffs,
        }
    }

    /// `a cos n theta + b sin n theta`.
    pub fn single_mode(n: usize, a: f64, b: f64) -> Self {
        let mut cos_coeffs = vec![0.0; n];
        let mut sin_coeffs = vec![0.0; n];
        cos_coeffs[n - 1] = a;
        sin_coeffs[n - 1] = b;
        Self::new(0.0, cos_coeffs, sin_coeffs)
    }

    /// `sin 2 theta`.
    pub fn sin2() -> Self {
        Self::single_mode(2, 0.0, 1.0)
    }

    /// True when every odd-mode coefficient vanishes, i.e. `r(theta) = r(theta + pi)`.
    pub fn is_symmetric(&self) -> bool {
        let odd_zero = |c: &[f64]| c.iter().step_by(2).all(|&v| v == 0.0);
        odd_zero(&self.cos_coeffs) && odd_zero(&self.sin_coeffs)
    }

    pub fn series(&self) -> FourierSeries {
        FourierSeries::new(self.mean, self.cos_coeffs.clone(), self.sin_coeffs.clone())
    }

    fn modes(&self) -> usize {
        self.cos_coeffs.len().max(self.sin_coeffs.len())
    }

    fn coeff(&self, n: usize) -> (f64, f64) {
        (
            self.cos_coeffs.get(n - 1).copied().unwrap_or(0.0),
            self.sin_coeffs.get(n - 1).copied().unwrap_or(0.0),
        )
    }
}

/// `R(theta) = 1 + eps r(theta)` as a radial spec.
pub fn perturbed_curve(r: &RadialProfile, eps: f64) -> Result<ClosedCurveSpec> {
    let spec = ClosedCurveSpec::FourierRadial {
        a0: 1.0 + eps * r.mean,
        cos_coeffs: r.cos_coeffs.iter().map(|c| eps * c).collect(),
        sin_coeffs: r.sin_coeffs.iter().map(|c| eps * c).collect(),
    };
    spec.validate()?;
    Ok(spec)
}

fn quadrature_points(series: &FourierSeries) -> usize {
    (32 * series.max_mode()).max(256)
}

/// `F(r) = (p+1) int r^2 - ((p+1) / 2 pi) (int r)^2 - int r'^2`, by the
/// trapezoid rule (exact for trigonometric polynomials at this resolution).
pub fn fuglede_functional(r: &RadialProfile, p: f64) -> f64 {
    let series = r.series();
    let m = quadrature_points(&series);
    let h = TAU / m as f64;
    let (mut r1, mut r2, mut d2) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let [v, dv, _] = series.eval(i as f64 * h);
        r1 += v;
        r2 += v * v;
        d2 += dv * dv;
    }
    let (r1, r2, d2) = (r1 * h, r2 * h, d2 * h);
    (p + 1.0) * r2 - (p + 1.0) / TAU * r1 * r1 - d2
}

/// `pi sum_n (p + 1 - n^2)(a_n^2 + b_n^2)`.
pub fn fuglede_parseval(r: &RadialProfile, p: f64) -> f64 {
    PI * (1..=r.modes())
        .map(|n| {
            let (a, b) = r.coeff(n);
            (p + 1.0 - (n * n) as f64) * (a * a + b * b)
        })
        .sum::<f64>()
}

#[derive(Debug, Clone, Serialize)]
pub struct FugledeReport {
    pub p: f64,
    pub f_quadrature: f64,
    pub f_parseval: f64,
    pub eps_grid: Vec<f64>,
    /// `int_{Gamma_eps} |x|^p - |Gamma_eps|^(p+1) / (2 pi)^p`.
    pub g_values: Vec<f64>,
    /// Least-squares `c2` in `G(eps) ~ c2 eps^2`.
    pub fitted_quadratic_coeff: f64,
    /// `p F(r) / 2`.
    pub expected_coeff: f64,
    pub relative_error: f64,
}

/// `n` logarithmically spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Fits `G(eps) ~ c2 eps^2` on sampled perturbed curves and compares with
/// `p F(r) / 2`.
pub fn expansion_check(r: &RadialProfile, p: f64, eps_grid: &[f64], n: usize) -> Result<FugledeReport> {
    if !r.is_symmetric() {
        return Err(Error::NotSymmetric("profile has odd-mode coefficients".into()));
    }
    let lo = eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eps_grid.iter().copied().fold(0.0, f64::max);
    if eps_grid.len() < 4 || !(lo > 0.0) || hi < 8.0 * lo * (1.0 - 1e-12) {
        return Err(Error::OutOfRange {
            name: "eps_grid",
            value: eps_grid.len() as f64,
            reason: "need at least 4 positive values spanning a factor of 8".into(),
        });
    }
    let g_values = eps_grid
        .par_iter()
        .map(|&eps| {
            let curve = sample(&perturbed_curve(r, eps)?, n)?;
            let trace = Trace::from_curve(&curve);
            let len = curve.length;
            Ok(trace.p_moment(p, Vec2::ZERO) - len.powf(p + 1.0) / TAU.powf(p))
        })
        .collect::<Result<Vec<f64>>>()?;
    let num: f64 = eps_grid.iter().zip(&g_values).map(|(e, g)| g * e * e).sum();
    let den: f64 = eps_grid.iter().map(|e| e.powi(4)).sum();
    let fitted = num / den;
    let f_quadrature = fuglede_functional(r, p);
    let expected = p * f_quadrature / 2.0;
    Ok(FugledeReport {
        p,
        f_quadrature,
        f_parseval: fuglede_parseval(r, p),
        eps_grid: eps_grid.to_vec(),
        g_values,
        fitted_quadratic_coeff: fitted,
        expected_coeff: expected,
        relative_error: (fitted - expected).abs() / expected.abs().max(f64::MIN_POSITIVE),
    })
}

/// Centroid offset allowed for a trace passed to [`normalized_functional_trace`],
/// relative to its length.
const CENTER_TOL: f64 = 1e-8;

/// `J_p = (2 pi)^p / |Gamma|^(p+1) int |x|^p` for a closed trace centered at
/// the origin, counting multiplicity.
pub fn normalized_functional_trace(trace: &Trace, p: f64) -> Result<f64> {
    let len = trace.length();
    let gap = trace.closure_gap();
    if gap > 1e-9 * (1.0 + len) {
        return Err(Error::NotClosed(gap));
    }
    let c = trace.centroid()?;
    if c.norm() > CENTER_TOL * len {
        return Err(Error::NotSymmetric(format!(
            "centroid ({:.3e}, {:.3e}) is not at the origin",
            c.x, c.y
        )));
    }
    Ok(TAU.powf(p) / len.powf(p + 1.0) * trace.p_moment(p, Vec2::ZERO))
}

/// [`normalized_functional_trace`] for a sampled spec, which must be
/// centrally symmetric.
pub fn normalized_functional(spec: &ClosedCurveSpec, p: f64, n: usize) -> Result<f64> {
    let curve = sample(spec, n)?;
    if !curve.is_centrally_symmetric(10.0 * curve.spacing()) {
        return Err(Error::NotSymmetric("curve is not centrally symmetric".into()));
    }
    normalized_functional_trace(&Trace::from_curve(&curve), p)
}

/// `J_p` of `theta -> r(theta)(cos theta, sin theta)` by the trapezoid rule
/// in `theta`; the origin is the center.
pub fn radial_functional(series: &FourierSeries, p: f64) -> f64 {
    let m = quadrature_points(series).max(512);
    let h = TAU / m as f64;
    let (mut len, mut moment) = (0.0, 0.0);
    for i in 0..m {
        let [v, dv, _] = series.eval(i as f64 * h);
        let ds = v.hypot(dv);
        len += ds;
        moment += v.abs().powf(p) * ds;
    }
    TAU.powf(p) / (len * h).powf(p + 1.0) * moment * h
}

/// `(pi / 2)^p / (p + 1)`.
pub fn doubly_covered_segment_value(p: f64) -> f64 {
    (PI / 2.0).powf(p) / (p + 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceEntry {
    pub eps: f64,
    /// Maximum radial deviation from the unit circle.
    pub max_deviation: f64,
    pub j_p: f64,
}

/// `J_p` along `1 + eps_n sin 2 theta`, `eps_n = eps0 / 2^n`.
pub fn symmetry_breaking_sequence(p: f64, count: usize, eps0: f64, n: usize) -> Result<Vec<SequenceEntry>> {
    if !(p > 3.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            reason: "symmetry breaking needs p > 3".into(),
        });
    }
    sin2_family(p, count, eps0, n)
}

/// The same family without the `p > 3` precondition, for comparison.
pub fn sin2_family(p: f64, count: usize, eps0: f64, n: usize) -> Result<Vec<SequenceEntry>> {
    let profile = RadialProfile::sin2();
    (0..count)
        .map(|k| {
            let eps = eps0 / 2f64.powi(k as i32);
            let spec = perturbed_curve(&profile, eps)?;
            Ok(SequenceEntry {
                eps,
                max_deviation: eps,
                j_p: normalized_functional(&spec, p, n)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptimizeOptions {
    pub p: f64,
    /// Even modes `2, 4, ..., 2 n_modes` are searched.
    pub n_modes: usize,
    pub restarts: usize,
    /// Function evaluations per restart.
    pub budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Iterate {
    pub restart: usize,
    pub evaluation: usize,
    pub j_p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub j_p: f64,
    pub evaluations: usize,
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeResult {
    pub p: f64,
    pub best_j: f64,
    /// The search only ever certifies `C_p >= best_j`.
    pub cp_lower_bound: f64,
    pub best_profile: RadialProfile,
    pub restarts: Vec<RestartOutcome>,
    /// Running best per restart, recorded at each improvement.
    pub trace: Vec<Iterate>,
}

/// Initial simplex edge and random start amplitude.
const SIMPLEX_STEP: f64 = 0.05;
const START_AMPLITUDE: f64 = 0.1;

fn profile_from(x: &[f64], n_modes: usize) -> RadialProfile {
    let mut cos_coeffs = vec![0.0; 2 * n_modes];
    let mut sin_coeffs = vec![0.0; 2 * n_modes];
    for k in 0..n_modes {
        cos_coeffs[2 * k + 1] = x[2 * k];
        sin_coeffs[2 * k + 1] = x[2 * k + 1];
    }
    RadialProfile::new(1.0, cos_coeffs, sin_coeffs)
}

fn feasible_value(series: &FourierSeries, p: f64) -> f64 {
    let m = quadrature_points(series).max(512);
    let min = (0..m)
        .map(|i| series.value(TAU * i as f64 / m as f64))
        .fold(f64::INFINITY, f64::min);
    if min < MIN_RADIUS {
        return f64::NAN;
    }
    radial_functional(series, p)
}

/// Maximizes `J_p` over `r = 1 + sum_{n even} a_n cos n theta + b_n sin n theta`
/// with seeded random restarts run in parallel. Deterministic for a fixed seed.
pub fn optimize_cp(opts: OptimizeOptions) -> Result<OptimizeResult> {
    if opts.n_modes == 0 || opts.n_modes > MAX_MODES {
        return Err(Error::OutOfRange {
            name: "n_modes",
            value: opts.n_modes as f64,
            reason: format!("must be in 1..={MAX_MODES}"),
        });
    }
    if opts.restarts == 0 {
        return Err(Error::OutOfRange {
            name: "restarts",
            value: 0.0,
            reason: "need at least one restart".into(),
        });
    }
    let dim = 2 * opts.n_modes;
    let runs: Vec<(RestartOutcome, Vec<f64>, Vec<Iterate>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(restart as u64));
            let x0: Vec<f64> = (0..dim)
                .map(|i| {
                    let decay = 1.0 / (1 + i / 2) as f64;
                    START_AMPLITUDE * decay * rng.gen_range(-1.0..1.0)
                })
                .collect();
            let mut trace = Vec::new();
            let mut best = f64::NEG_INFINITY;
            let mut evaluation = 0;
            let result = minimize(
                |x| {
                    evaluation += 1;
                    let j = feasible_value(&profile_from(x, opts.n_modes).series(), opts.p);
                    if j > best {
                        best = j;
                        trace.push(Iterate {
                            restart,
                            evaluation,
                            j_p: j,
                        });
                    }
                    -j
                },
                &x0,
                SIMPLEX_STEP,
                SimplexOptions {
                    max_evals: opts.budget,
                    ..SimplexOptions::default()
                },
            );
            let j_p = -result.value;
            let outcome = RestartOutcome {
                restart,
                j_p,
                evaluations: result.evals,
                feasible: j_p.is_finite(),
            };
            (outcome, result.x, trace)
        })
        .collect();
    let mut best: Option<(f64, &Vec<f64>)> = None;
    for (outcome, x, _) in &runs {
        if outcome.feasible && best.is_none_or(|(j, _)| outcome.j_p > j) {
            best = Some((outcome.j_p, x));
        }
    }
    let (best_j, x) = best.ok_or(Error::Infeasible)?;
    let best_profile = profile_from(x, opts.n_modes);
    let mut restarts = Vec::with_capacity(runs.len());
    let mut trace = Vec::new();
    for (outcome, _, iterates) in runs {
        restarts.push(outcome);
        trace.extend(iterates);
    }
    Ok(OptimizeResult {
        p: opts.p,
        best_j,
        cp_lower_bound: best_j,
        best_profile,
        restarts,
        trace,
    })
}
