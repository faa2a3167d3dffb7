use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed curve document: {0}")]
    Parse(String),

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("radius is not positive: min {min:.6} at theta = {theta:.6}")]
    NonPositiveRadius { min: f64, theta: f64 },

    #[error("curve is not simple")]
    NotSimple,

    #[error("degenerate parametrization: {0}")]
    Degenerate(String),

    #[error("{name} = {value} is out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("level t = {0} is not regular")]
    IrregularLevel(f64),

    #[error("inner parallel set at t = {0} is empty")]
    EmptyParallelSet(f64),

    #[error("no interior grid point found; domain too thin for the search grid")]
    NoInteriorPoint,

    #[error("point lies on the arc (distance {0:.3e})")]
    PointOnArc(f64),

    #[error("angle unwrapping failed: {0}")]
    Unwrap(String),

    #[error("endpoint extrapolation did not converge (spread {0:.3e})")]
    Extrapolation(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("input is not centrally symmetric: {0}")]
    NotSymmetric(String),

    #[error("trace is not closed (gap {0:.3e})")]
    NotClosed(f64),

    #[error("zero total length")]
    ZeroLength,

    #[error("no feasible evaluation within the budget")]
    Infeasible,
}
