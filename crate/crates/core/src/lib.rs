//! Integral transforms between sequence generating functions.
//!
//! The crate converts a sequence's ordinary generating function (OGF) into
//! its exponential generating function (EGF) and a family of related
//! "modified" series by numerical quadrature, and checks every result
//! against an independent term-by-term oracle.
//!
//! Layout:
//! - [`series`]: coefficient sequences, OGF/EGF evaluation with tail bounds,
//!   truncated power-series arithmetic and the Euler transform.
//! - [`special`]: reciprocal gamma, its Taylor coefficients, Mittag-Leffler
//!   kernels, complex `erf`, `I0`, multifactorials.
//! - [`quadrature`]: periodic, semi-infinite and oscillatory real-line rules.
//! - [`transforms`]: the generating-function transforms and kernel calibration.
//! - [`oracle`]: brute-force summation of every target series.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use oracle::{compare, oracle_sum, OracleResult, Verdict};
pub use quadrature::{Domain, Envelope, EstimateKind, IntegralKernel, IntegrationResult, QuadratureConfig};
pub use series::{CoefficientSequence, Growth, SeriesFamily, SeriesValue, TruncatedSeries};
pub use transforms::{CalibrationReport, PolylogForm, TransformId, TransformOutput};
