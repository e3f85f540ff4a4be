//! Brute-force references for differential testing.
//!
//! Nothing here consults engine internals: mapped partner points are
//! re-derived from the raw defining equations and fed back through the
//! evaluator under test.

use crate::affine::AffineMap;
use crate::error::Error;
use crate::penlp::EquationSpec;

/// Literal n-fold loop application of a map; the reference for
/// [`AffineMap::iterate_closed`].
pub fn iterate_loop(map: &AffineMap, x0: f64, n: u32) -> f64 {
    let mut x = x0;
    for _ in 0..n {
        x = map.apply(x);
    }
    x
}

/// Worst residual of the family's defining equation over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub argmax_point: f64,
    pub samples: usize,
    /// `max_abs_residual <= tol * (1 + scale)` with `scale` the largest
    /// magnitude the evaluator produced on the grid.
    pub within_tol: bool,
}

impl ResidualReport {
    pub fn csv_row(&self, family: &str, params: &str) -> String {
        format!(
            "{},{},{},{},{}",
            family, params, self.samples, self.max_abs_residual, self.argmax_point
        )
    }
}

/// Evaluate the family residual (for example `|y(x+1) - y(bx)|`) at every
/// grid point through the supplied evaluator. Out-of-domain partners are
/// surfaced as errors carrying the offending grid point.
pub fn residual_sweep<F>(
    eval: F,
    family: &EquationSpec,
    grid: &[f64],
    tol: f64,
) -> Result<ResidualReport, Error>
where
    F: Fn(f64) -> Result<f64, Error>,
{
    if grid.is_empty() {
        return Err(Error::Argument("residual sweep needs a nonempty grid".to_string()));
    }
    let mut max_abs = 0.0f64;
    let mut argmax = grid[0];
    let mut scale = 0.0f64;
    for &x in grid {
        let at = |p: f64| -> Result<f64, Error> {
            let v = eval(p).map_err(|e| match e {
                Error::OutOfDomain { .. } => Error::OutOfDomain { x },
                other => other,
            })?;
            Ok(v)
        };
        let residual = match family {
            EquationSpec::ShiftScale { b } => {
                let (l, r) = (at(x + 1.0)?, at(b * x)?);
                scale = scale.max(l.abs()).max(r.abs());
                (l - r).abs()
            }
            EquationSpec::PureScale { b } => {
                let (l, r) = (at(x)?, at(b * x)?);
                scale = scale.max(l.abs()).max(r.abs());
                (l - r).abs()
            }
            EquationSpec::EvenParity => {
                let (l, r) = (at(x)?, at(-x)?);
                scale = scale.max(l.abs()).max(r.abs());
                (l - r).abs()
            }
            EquationSpec::OddParity => {
                let (l, r) = (at(-x)?, at(x)?);
                scale = scale.max(l.abs()).max(r.abs());
                (l + r).abs()
            }
            EquationSpec::ThreeTerm => {
                let (a, b2, c) = (at(3.0 * x)?, at(x)?, at(2.0 * x)?);
                scale = scale.max(a.abs()).max(b2.abs()).max(c.abs());
                (a - b2 - c).abs()
            }
        };
        if residual > max_abs {
            max_abs = residual;
            argmax = x;
        }
    }
    Ok(ResidualReport {
        max_abs_residual: max_abs,
        argmax_point: argmax,
        samples: grid.len(),
        within_tol: max_abs <= tol * (1.0 + scale),
    })
}
