//! Crate-wide error type.

use thiserror::Error as ThisError;

use crate::expr::ParseError;
use crate::interval::{Extent, Interval};

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("intervals overlap: {a} and {b}")]
    Overlap { a: Interval, b: Interval },

    #[error("interval syntax error: {0}")]
    IntervalSyntax(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    /// Expression evaluation left the real domain (log of a non-positive
    /// number, division by zero, non-finite result).
    #[error("expression domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: anchor coincides with the fixed point {fixed_point}")]
    Degenerate { fixed_point: f64 },

    #[error("point {x} is outside the solvable domain")]
    OutOfDomain { x: f64 },

    #[error("initial set has the wrong shape: expected {expected}")]
    Shape { expected: String },

    /// The closure of the initial set contains a limit point of the
    /// equation, so no neighborhood of that point is excluded.
    #[error("initial set violates neighborhood exclusion: its closure contains the limit point {limit_point}")]
    Penlp { limit_point: f64 },

    #[error("scale parameter b must be nonzero")]
    ZeroB,

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("representative set does not cover the domain: {uncovered} is unreachable")]
    Coverage { uncovered: Extent },

    #[error("recursion depth exceeded {0} levels")]
    RecursionDepth(usize),

    #[error("iteration cap of {0} steps exceeded")]
    IterationCap(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
