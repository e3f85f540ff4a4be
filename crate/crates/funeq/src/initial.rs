//! Initial data: an interval union together with one expression per piece.

use crate::error::Error;
use crate::expr::Expr;
use crate::interval::{Interval, IntervalUnion};

/// Piecewise initial function. The piece intervals partition the set
/// exactly; overlapping pieces are rejected at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    set: IntervalUnion,
    pieces: Vec<(Interval, Expr)>,
}

impl InitialData {
    pub fn new(pieces: Vec<(Interval, Expr)>) -> Result<Self, Error> {
        if pieces.is_empty() {
            return Err(Error::Argument("initial data needs at least one piece".to_string()));
        }
        let set = IntervalUnion::normalize(pieces.iter().map(|(iv, _)| *iv).collect())?;
        Ok(Self { set, pieces })
    }

    /// One expression over an entire union: every part becomes a piece.
    pub fn uniform(set: IntervalUnion, expr: Expr) -> Result<Self, Error> {
        let pieces = set.parts().iter().map(|iv| (*iv, expr.clone())).collect();
        Self::new(pieces)
    }

    pub fn set(&self) -> &IntervalUnion {
        &self.set
    }

    pub fn pieces(&self) -> &[(Interval, Expr)] {
        &self.pieces
    }

    pub fn contains(&self, x: f64) -> bool {
        self.set.contains(x)
    }

    /// Value by exact membership; the restriction path, no arithmetic on `x`.
    pub fn value_at(&self, x: f64) -> Result<f64, Error> {
        for (iv, expr) in &self.pieces {
            if iv.contains(x) {
                return expr.eval(x);
            }
        }
        Err(Error::OutOfDomain { x })
    }

    /// Value for a mapped iterate: exact membership first, then closure
    /// membership. Iterates land in the set up to the measure-zero endpoint
    /// convention, and the closure fallback absorbs exactly those landings.
    pub fn value_near(&self, x: f64) -> Result<f64, Error> {
        for (iv, expr) in &self.pieces {
            if iv.contains(x) {
                return expr.eval(x);
            }
        }
        for (iv, expr) in &self.pieces {
            if iv.closure_contains(x) {
                return expr.eval(x);
            }
        }
        Err(Error::OutOfDomain { x })
    }

    /// Rewrite every piece to the canonical `[lo, hi)` closure convention.
    pub fn canonical(&self) -> Result<Self, Error> {
        let pieces = self
            .pieces
            .iter()
            .map(|(iv, expr)| Ok((iv.canonical()?, expr.clone())))
            .collect::<Result<Vec<_>, Error>>()?;
        Self::new(pieces)
    }

    /// The pieces whose intervals lie inside `part`, as standalone data.
    pub fn restrict_to(&self, part: &Interval) -> Result<Self, Error> {
        let pieces: Vec<_> = self
            .pieces
            .iter()
            .filter(|(iv, _)| iv.within(part))
            .cloned()
            .collect();
        Self::new(pieces)
    }
}
