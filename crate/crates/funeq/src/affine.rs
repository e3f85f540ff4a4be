//! Affine maps `x -> s*x + c`, their closed-form iterates, and the
//! geometric interval families generated by the shift-scale recurrences.

use crate::error::Error;
use crate::interval::Interval;

/// Abscissa of the intersection of `y = x + 1` and `y = b*x`: `1/(b-1)`.
/// It is the common fixed point of the forward/backward anchor recurrences.
pub fn anchor_fixed_point(b: f64) -> f64 {
    1.0 / (b - 1.0)
}

/// Ordinate of that intersection, `b/(b-1)`. It is the fixed point of both
/// evaluation maps and the limit point the initial set must stay away from.
pub fn limit_point(b: f64) -> f64 {
    b / (b - 1.0)
}

/// `x -> slope*x + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    slope: f64,
    offset: f64,
}

impl AffineMap {
    pub fn new(slope: f64, offset: f64) -> Self {
        Self { slope, offset }
    }

    /// Anchor recurrence moving away from the fixed point: `x -> x/b + 1/b`.
    pub fn anchor_forward(b: f64) -> Self {
        Self::new(1.0 / b, 1.0 / b)
    }

    /// Anchor recurrence moving toward the fixed point: `x -> b*x - 1`.
    pub fn anchor_backward(b: f64) -> Self {
        Self::new(b, -1.0)
    }

    /// Evaluation map `x -> b*(x - 1)`; descends the interval ladder.
    /// On a cobweb diagram the steps run clockwise.
    pub fn clockwise(b: f64) -> Self {
        Self::new(b, -b)
    }

    /// Inverse evaluation map `x -> x/b + 1`; ascends the interval ladder.
    pub fn counterclockwise(b: f64) -> Self {
        Self::new(1.0 / b, 1.0)
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }

    /// `offset/(1 - slope)`, or `None` for a pure translation.
    pub fn fixed_point(&self) -> Option<f64> {
        if self.slope == 1.0 {
            None
        } else {
            Some(self.offset / (1.0 - self.slope))
        }
    }

    /// The n-th iterate in closed form: `slope^n (x0 - p) + p` around the
    /// fixed point `p`, or `x0 + n*offset` for a translation.
    pub fn iterate_closed(&self, x0: f64, n: u32) -> f64 {
        match self.fixed_point() {
            None => x0 + n as f64 * self.offset,
            Some(p) => self.slope.powi(n as i32) * (x0 - p) + p,
        }
    }
}

fn check_family_params(x0: f64, b: f64) -> Result<(), Error> {
    if !(b > 0.0) || b == 1.0 || !b.is_finite() {
        return Err(Error::Argument(format!(
            "interval families require 0 < b < 1 or b > 1, got b={b}"
        )));
    }
    let fixed = anchor_fixed_point(b);
    if (x0 - fixed).abs() <= 1e-12 {
        return Err(Error::Degenerate { fixed_point: fixed });
    }
    Ok(())
}

/// The k-th member of the geometric interval family anchored at `x0`.
///
/// Endpoints are `L + (x0 - p) b^(1-k)` and `L + (x0 - p) b^(-k)` where
/// `p` is the anchor fixed point and `L = p + 1` the limit point;
/// orientation is normalized so the result is `[lo, hi)` with `lo < hi`.
/// Consecutive members share an endpoint bit-for-bit, so the family tiles
/// its range with no gaps under exact comparison.
pub fn interval_family(x0: f64, b: f64, k: i32) -> Result<Interval, Error> {
    check_family_params(x0, b)?;
    let spread = x0 - anchor_fixed_point(b);
    let limit = limit_point(b);
    let e1 = limit + spread * powi_checked(b, 1 - k)?;
    let e2 = limit + spread * powi_checked(b, -k)?;
    if !e1.is_finite() || !e2.is_finite() {
        return Err(Error::Argument(format!("family index {k} out of representable range")));
    }
    let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
    Interval::closed_open(lo, hi)
}

/// The unique `k` with `x` in the k-th family member.
///
/// A logarithmic guess is corrected by direct membership over
/// `{k-1, k, k+1}`; floating-point logarithms are not boundary-exact.
pub fn locate_index(x: f64, x0: f64, b: f64) -> Result<i32, Error> {
    check_family_params(x0, b)?;
    let spread = x0 - anchor_fixed_point(b);
    let ratio = (x - limit_point(b)) / spread;
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::OutOfDomain { x });
    }
    let guess = (ratio.ln() / (1.0 / b).ln()).round().clamp(-1e6, 1e6) as i32;
    for k in [guess - 1, guess, guess + 1] {
        if let Ok(member) = interval_family(x0, b, k) {
            if member.contains(x) {
                return Ok(k);
            }
        }
    }
    Err(Error::OutOfDomain { x })
}

fn powi_checked(base: f64, exp: i32) -> Result<f64, Error> {
    let v = base.powi(exp);
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Argument(format!(
            "power {base}^{exp} leaves the representable range"
        )));
    }
    Ok(v)
}
