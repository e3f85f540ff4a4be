//! The equation `y(3x) = y(x) + y(2x)`: memoized two-way recursion from a
//! base band, plus the binomial-expansion diagnostic used to witness
//! inconsistent data near the limit point at zero.

use std::collections::HashMap;

use crate::error::Error;
use crate::expr::Expr;
use crate::interval::Interval;

const MAX_DEPTH: usize = 10_000;
const MAX_BINOMIAL_ORDER: u32 = 60;

#[derive(Debug, Clone)]
struct SideSpec {
    base: Interval,
    expr: Expr,
}

/// Problem data: an optional positive side `f` on `[eps, 3*eps)` and an
/// optional negative side `g` on `(-3*delta, -delta]`. `y(0) = 0` always.
#[derive(Debug, Clone)]
pub struct ThreeTermProblem {
    pos: Option<SideSpec>,
    neg: Option<SideSpec>,
}

impl ThreeTermProblem {
    pub fn new(pos: Option<(f64, Expr)>, neg: Option<(f64, Expr)>) -> Result<Self, Error> {
        if pos.is_none() && neg.is_none() {
            return Err(Error::Argument("at least one side must carry data".to_string()));
        }
        let pos = pos
            .map(|(eps, expr)| {
                if !(eps > 0.0) || !eps.is_finite() {
                    return Err(Error::Argument(format!("eps must be positive, got {eps}")));
                }
                Ok(SideSpec { base: Interval::new(eps, 3.0 * eps, true, false)?, expr })
            })
            .transpose()?;
        let neg = neg
            .map(|(delta, expr)| {
                if !(delta > 0.0) || !delta.is_finite() {
                    return Err(Error::Argument(format!("delta must be positive, got {delta}")));
                }
                Ok(SideSpec { base: Interval::new(-3.0 * delta, -delta, false, true)?, expr })
            })
            .transpose()?;
        Ok(Self { pos, neg })
    }

    pub fn positive_base(&self) -> Option<&Interval> {
        self.pos.as_ref().map(|s| &s.base)
    }

    pub fn negative_base(&self) -> Option<&Interval> {
        self.neg.as_ref().map(|s| &s.base)
    }

    /// Evaluate the unique extension at `x`.
    ///
    /// Above the base band the forward split `y(x) = y(x/3) + y(2x/3)`
    /// strictly shrinks arguments toward the band; below it the backward
    /// split `y(x) = y(3x) - y(2x)` strictly grows them. The memo table is
    /// scoped to this call and keyed on exact bit patterns, so it never
    /// conflates distinct points.
    pub fn evaluate(&self, x: f64) -> Result<f64, Error> {
        let mut memo = HashMap::new();
        self.eval_rec(x, 0, &mut memo)
    }

    fn eval_rec(
        &self,
        x: f64,
        depth: usize,
        memo: &mut HashMap<u64, f64>,
    ) -> Result<f64, Error> {
        if depth > MAX_DEPTH {
            return Err(Error::RecursionDepth(MAX_DEPTH));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if let Some(v) = memo.get(&x.to_bits()) {
            return Ok(*v);
        }
        let v = if x > 0.0 {
            let side = self.pos.as_ref().ok_or(Error::OutOfDomain { x })?;
            if side.base.contains(x) {
                side.expr.eval(x)?
            } else if x >= side.base.hi() {
                self.eval_rec(x / 3.0, depth + 1, memo)?
                    + self.eval_rec(2.0 * x / 3.0, depth + 1, memo)?
            } else {
                self.eval_rec(3.0 * x, depth + 1, memo)?
                    - self.eval_rec(2.0 * x, depth + 1, memo)?
            }
        } else {
            let side = self.neg.as_ref().ok_or(Error::OutOfDomain { x })?;
            if side.base.contains(x) {
                side.expr.eval(x)?
            } else if x <= side.base.lo() {
                self.eval_rec(x / 3.0, depth + 1, memo)?
                    + self.eval_rec(2.0 * x / 3.0, depth + 1, memo)?
            } else {
                self.eval_rec(3.0 * x, depth + 1, memo)?
                    - self.eval_rec(2.0 * x, depth + 1, memo)?
            }
        };
        memo.insert(x.to_bits(), v);
        Ok(v)
    }
}

/// Exact binomial coefficients `C(n, 0..=n)` via the multiplicative
/// recurrence; overflow-checked, supported for `n <= 60`.
fn binomial_row(n: u32) -> Result<Vec<u128>, Error> {
    if n > MAX_BINOMIAL_ORDER {
        return Err(Error::Argument(format!(
            "binomial order {n} exceeds the exact-integer limit {MAX_BINOMIAL_ORDER}"
        )));
    }
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c: u128 = 1;
    row.push(c);
    for r in 0..n as u128 {
        c = c
            .checked_mul(n as u128 - r)
            .ok_or_else(|| Error::Argument("binomial coefficient overflow".to_string()))?
            / (r + 1);
        row.push(c);
    }
    Ok(row)
}

/// The n-fold rearrangement of the equation evaluated through `f`:
/// `sum_r C(n,r) f(2^r x / 3^n)`.
pub fn binomial_expand(f: &Expr, x: f64, n: u32) -> Result<f64, Error> {
    let row = binomial_row(n)?;
    let scale = 3f64.powi(n as i32);
    let mut total = 0.0;
    for (r, c) in row.iter().enumerate() {
        let node = 2f64.powi(r as i32) * x / scale;
        total += *c as f64 * f.eval(node)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Consistency {
    Consistent,
    Inconsistent { v1: f64, v2: f64 },
}

/// Compare the binomial expansion at two orders. A mismatch is the
/// executable witness that data near the limit point over-constrains the
/// equation; linear data passes at every order.
pub fn consistency_probe(
    f: &Expr,
    x: f64,
    n1: u32,
    n2: u32,
    tol: f64,
) -> Result<Consistency, Error> {
    if n1 == n2 {
        return Err(Error::Argument("probe orders must differ".to_string()));
    }
    let v1 = binomial_expand(f, x, n1)?;
    let v2 = binomial_expand(f, x, n2)?;
    if (v1 - v2).abs() > tol * (1.0 + v1.abs()) {
        Ok(Consistency::Inconsistent { v1, v2 })
    } else {
        Ok(Consistency::Consistent)
    }
}
