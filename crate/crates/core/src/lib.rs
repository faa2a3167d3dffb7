//! Inner parallel curves of planar domains and the isoperimetric-type
//! inequalities they satisfy.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod arclength;
pub mod cover;
pub mod curve;
pub mod error;
pub mod fuglede;
pub mod intersect;
pub mod moment;
pub mod offset;
pub mod quadrature;
pub mod simplex;
pub mod trace;
pub mod vec2;
pub mod winding;

pub use curve::{parse_spec, sample, ClosedCurveSpec, FourierSeries, Frame, Preset, SampledCurve};
pub use error::{Error, Result};
pub use fuglede::RadialProfile;
pub use offset::{Domain, ParallelSet};
pub use trace::{ArcPiece, Piece, Trace};
pub use vec2::Vec2;
pub use winding::{OpenArc, WindingResult};
