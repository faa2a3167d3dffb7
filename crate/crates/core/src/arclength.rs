//! Cumulative arc length of a parametrized curve and its inverse.

use crate::error::{Error, Result};
use crate::quadrature::gauss5;

/// Cumulative arc length tabulated at parameter knots, with 5-point
/// Gauss-Legendre on every knot interval.
#[derive(Debug, Clone)]
pub(crate) struct ArcLengthTable {
    knots: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ArcLengthTable {
    /// `knots` must be strictly increasing; place knots at any point where the
    /// speed is not smooth.
    pub(crate) fn build(knots: Vec<f64>, speed: impl Fn(f64) -> f64) -> Result<Self> {
        let rule = gauss5();
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        let mut min_speed = f64::INFINITY;
        for w in knots.windows(2) {
            acc += rule.integrate(w[0], w[1], |u| {
                let v = speed(u);
                min_speed = min_speed.min(v);
                v
            });
            cumulative.push(acc);
        }
        if !(acc.is_finite() && acc > 0.0) || min_speed <= 1e-12 * acc {
            return Err(Error::Degenerate(format!(
                "speed vanishes (min {min_speed:.3e}); arc-length inversion is not monotone"
            )));
        }
        Ok(Self { knots, cumulative })
    }

    /// Uniform knots on `[lo, hi]`.
    pub(crate) fn uniform_knots(lo: f64, hi: f64, intervals: usize) -> Vec<f64> {
        let h = (hi - lo) / intervals as f64;
        (0..=intervals).map(|j| lo + j as f64 * h).collect()
    }

    pub(crate) fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    /// Parameter at arc length `s` in `[0, total]`, by Newton iteration on the
    /// partial integral inside the bracketing knot interval.
    pub(crate) fn param_of(&self, s: f64, speed: impl Fn(f64) -> f64) -> f64 {
        let cum = &self.cumulative;
        let j = match cum.binary_search_by(|v| v.total_cmp(&s)) {
            Ok(j) => return self.knots[j],
            Err(j) => j.saturating_sub(1).min(cum.len() - 2),
        };
        let (lo, hi) = (self.knots[j], self.knots[j + 1]);
        let target = s - cum[j];
        let mut u = lo + (hi - lo) * target / (cum[j + 1] - cum[j]);
        let rule = gauss5();
        for _ in 0..8 {
            let partial = rule.integrate(lo, u, &speed);
            let step = (partial - target) / speed(u);
            u = (u - step).clamp(lo, hi);
            if step.abs() < 1e-15 * (1.0 + u.abs()) {
                break;
            }
        }
        u
    }
}
