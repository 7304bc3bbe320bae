//! Linear forms in values of Dirichlet-type series at integers.
//!
//! `forms` builds the rational function and its exact coefficients,
//! `eval` evaluates the form numerically, `saddle` holds the saddle-point
//! analysis and `bounds` the irrationality-dimension bounds.

pub mod bounds;
pub mod error;
pub mod eval;
pub mod forms;
pub mod precision;
pub mod saddle;
pub mod series;

pub use error::{Error, Result};
pub use forms::{build_p, eval_p_exact, lcm_upto, linear_form_coeffs, partial_fractions, FormParams, LinearFormCoeffs, PartialFractionTable, RationalFunctionRep};
pub use precision::PrecisionSpec;
pub use series::PeriodicSeries;
