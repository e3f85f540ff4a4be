//! funeq: initial value problems for shift/scale/parity functional
//! equations.
//!
//! Supported families:
//! - `y(x+1) = y(bx)` for any nonzero `b` ([`shift_scale`])
//! - `y(x) = y(bx)` for `|b| != 0, 1` ([`scale`])
//! - the even and odd symmetry equations ([`parity`])
//! - `y(3x) = y(x) + y(2x)` ([`three_term`])
//!
//! Given data on a suitable initial set, each engine evaluates the unique
//! extension at arbitrary points via closed-form iterate and interval
//! partition formulas. The [`penlp`] module computes the limit points of
//! each equation and validates that an initial set keeps a positive gap
//! from them, the necessary condition for well-posedness; it also
//! classifies initial intervals as well-posed, overdetermined, or
//! underdetermined. [`oracle`] holds independent brute-force references
//! used for differential testing.

pub mod affine;
pub mod error;
pub mod expr;
pub mod initial;
pub mod interval;
pub mod oracle;
pub mod parity;
pub mod penlp;
pub mod scale;
pub mod shift_scale;
pub mod three_term;

pub use error::Error;
pub use expr::Expr;
pub use initial::InitialData;
pub use interval::{Extent, Interval, IntervalUnion};
pub use penlp::{Classification, EquationSpec};
