//! Exact divisor theory on compact metric graphs.
//!
//! Metric graphs with rational edge lengths are normalized to unit-length
//! loopless models, on which chip-firing decides linear equivalence and the
//! Baker–Norine rank is computed exactly. The [`verifiers`] module checks
//! Riemann–Roch, Clifford's inequality and the hyperelliptic equality cases
//! on concrete curves; [`harness`] drives them from the command line.

pub mod curve;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod metric;
pub mod model;
pub mod parse;
pub mod rank;
pub mod reduction;
pub mod verifiers;

pub use curve::Curve;
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use metric::{MetricDivisor, MetricGraph, PointLocation, Rational};
pub use model::{normalize_to_model, ModelDivisor, ModelGraph};
pub use rank::{rank_oracle, RankEngine, RankMethod, RankResult};
pub use reduction::{
    dhar_unburnt, divisor_of, is_equivalent, reduce, script_to_witness, FiringScript, PLFunction,
    ReducedForm,
};
