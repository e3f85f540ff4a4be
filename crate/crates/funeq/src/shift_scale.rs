//! Solver for the initial value problem of `y(x+1) = y(bx)` across every
//! parameter regime of the scale factor `b`.
//!
//! For `b = 1` the extension is the periodic wrap of the data. For other
//! positive `b` a query is moved into the initial interval along the
//! geometric interval ladder anchored at the recovered `x0`. For negative
//! `b` (except the involution `b = -1`) iterates spiral around the limit
//! point `b/(b-1)` and the query is moved into a two-piece annulus around
//! it. The limit point itself is never solvable.

use crate::affine::{anchor_fixed_point, limit_point, locate_index, AffineMap};
use crate::error::Error;
use crate::initial::InitialData;
use crate::interval::{Extent, Interval, IntervalUnion};
use crate::penlp::{validate_initial_set, EquationSpec};

const ITERATION_CAP: usize = 10_000;
const SHAPE_RTOL: f64 = 1e-9;

/// Parameter regime, determined by `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    BEqOne,
    BGtOne,
    BZeroOne,
    BEqNegOne,
    BNegOneZero,
    BLtNegOne,
}

pub fn regime_of(b: f64) -> Result<Regime, Error> {
    if b == 0.0 {
        return Err(Error::ZeroB);
    }
    if !b.is_finite() {
        return Err(Error::Argument(format!("b must be finite, got {b}")));
    }
    Ok(if b == 1.0 {
        Regime::BEqOne
    } else if b > 1.0 {
        Regime::BGtOne
    } else if b > 0.0 {
        Regime::BZeroOne
    } else if b == -1.0 {
        Regime::BEqNegOne
    } else if b > -1.0 {
        Regime::BNegOneZero
    } else {
        Regime::BLtNegOne
    })
}

#[derive(Debug, Clone)]
struct Side {
    x0: f64,
    data: InitialData,
}

#[derive(Debug, Clone)]
enum Kind {
    /// `b = 1`: one unit interval `[x0, x0+1)` wraps periodically.
    Periodic { x0: f64, data: InitialData },
    /// `b = -1`: data on `[1/2, x0+1)` reflects through `x -> 1-x`.
    Reflect { x0: f64, data: InitialData },
    /// `b > 0`, `b != 1`: ladder evaluation on one or both sides of the
    /// limit point.
    Sided { upper: Option<Side>, lower: Option<Side> },
    /// `b < 0`, `b != -1`: a symmetric two-piece annulus around the limit
    /// point with radii `[r_in, r_out)`.
    Annulus { eps: f64, r_in: f64, r_out: f64, data: InitialData },
}

/// A validated initial value problem for `y(x+1) = y(bx)`.
#[derive(Debug, Clone)]
pub struct ShiftScaleProblem {
    b: f64,
    regime: Regime,
    kind: Kind,
}

/// One finite run of the regime's iteration from a query point down into
/// the initial set. `exponent` is the signed power of `b` the closed-form
/// evaluation uses; its magnitude is the number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub points: Vec<f64>,
    pub exponent: i64,
}

impl ShiftScaleProblem {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The anchor the initial set was validated against: `x0` for shift
    /// regimes, the outer/inner radius parameter for the annulus regimes.
    pub fn anchor(&self) -> f64 {
        match &self.kind {
            Kind::Periodic { x0, .. } | Kind::Reflect { x0, .. } => *x0,
            Kind::Sided { upper, lower } => {
                upper.as_ref().or(lower.as_ref()).map(|s| s.x0).unwrap_or(f64::NAN)
            }
            Kind::Annulus { eps, .. } => *eps,
        }
    }

    /// Intersection abscissa `1/(b-1)`; absent for the pure shift `b = 1`.
    pub fn fixed_abscissa(&self) -> Option<f64> {
        (self.b != 1.0).then(|| anchor_fixed_point(self.b))
    }

    /// The limit point `b/(b-1)`; absent for `b = 1` and `b = -1`, which
    /// have none.
    pub fn limit(&self) -> Option<f64> {
        (self.b != 1.0 && self.b != -1.0).then(|| limit_point(self.b))
    }

    pub fn initial_set(&self) -> IntervalUnion {
        match &self.kind {
            Kind::Periodic { data, .. }
            | Kind::Reflect { data, .. }
            | Kind::Annulus { data, .. } => data.set().clone(),
            Kind::Sided { upper, lower } => {
                let mut parts = Vec::new();
                for side in [upper, lower].into_iter().flatten() {
                    parts.extend_from_slice(side.data.set().parts());
                }
                IntervalUnion::normalize(parts).expect("validated sides are disjoint")
            }
        }
    }

    /// Value of the unique extension at `x`.
    pub fn evaluate(&self, x: f64) -> Result<f64, Error> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain { x });
        }
        match &self.kind {
            Kind::Periodic { x0, data } => {
                if data.contains(x) {
                    return data.value_at(x);
                }
                data.value_near(x0 + wrap_unit(x - x0))
            }
            Kind::Reflect { x0, data } => {
                if data.contains(x) {
                    return data.value_at(x);
                }
                if x > -x0 && x < 0.5 {
                    return data.value_near(1.0 - x);
                }
                Err(Error::OutOfDomain { x })
            }
            Kind::Sided { upper, lower } => {
                let limit = limit_point(self.b);
                let side = if x > limit {
                    upper.as_ref()
                } else if x < limit {
                    lower.as_ref()
                } else {
                    None
                };
                let side = side.ok_or(Error::OutOfDomain { x })?;
                if side.data.contains(x) {
                    return side.data.value_at(x);
                }
                let k = locate_index(x, side.x0, self.b)?;
                let target = self.b.powi(k) * (x - limit) + limit;
                side.data.value_near(target)
            }
            Kind::Annulus { r_in, r_out, data, .. } => {
                if data.contains(x) {
                    return data.value_at(x);
                }
                let limit = limit_point(self.b);
                let m = self.band_exponent(x, *r_in, *r_out)?;
                let target = self.b.powi(m) * (x - limit) + limit;
                data.value_near(target)
            }
        }
    }

    /// Maximal set the data extends to, as reporting extents.
    pub fn max_domain(&self) -> Vec<Extent> {
        match &self.kind {
            Kind::Periodic { .. } => vec![Extent::all_reals()],
            Kind::Reflect { x0, .. } => {
                vec![Extent { lo: Some(-x0), hi: Some(x0 + 1.0), lo_closed: false, hi_closed: false }]
            }
            Kind::Sided { upper, lower } => {
                let limit = limit_point(self.b);
                let mut out = Vec::new();
                if lower.is_some() {
                    out.push(Extent::below(limit, false));
                }
                if upper.is_some() {
                    out.push(Extent::above(limit, false));
                }
                out
            }
            Kind::Annulus { .. } => {
                let limit = limit_point(self.b);
                vec![Extent::below(limit, false), Extent::above(limit, false)]
            }
        }
    }

    /// The iterate sequence from `x` into the initial set, one application
    /// of the regime's mapping per step.
    pub fn trace(&self, x: f64) -> Result<IterationTrace, Error> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain { x });
        }
        match &self.kind {
            Kind::Periodic { x0, data } => {
                if data.contains(x) {
                    return Ok(IterationTrace { points: vec![x], exponent: 0 });
                }
                let shift = (x - x0).floor();
                let steps = shift.abs();
                if steps > ITERATION_CAP as f64 {
                    return Err(Error::IterationCap(ITERATION_CAP));
                }
                let mut points = vec![x];
                let mut t = x;
                let delta = if shift > 0.0 { -1.0 } else { 1.0 };
                for _ in 0..steps as usize {
                    t += delta;
                    points.push(t);
                }
                Ok(IterationTrace { points, exponent: shift as i64 })
            }
            Kind::Reflect { x0, data } => {
                if data.contains(x) {
                    return Ok(IterationTrace { points: vec![x], exponent: 0 });
                }
                if x > -x0 && x < 0.5 {
                    return Ok(IterationTrace { points: vec![x, 1.0 - x], exponent: 1 });
                }
                Err(Error::OutOfDomain { x })
            }
            Kind::Sided { upper, lower } => {
                let limit = limit_point(self.b);
                let side = if x > limit { upper.as_ref() } else { lower.as_ref() };
                let side = side.ok_or(Error::OutOfDomain { x })?;
                if side.data.contains(x) {
                    return Ok(IterationTrace { points: vec![x], exponent: 0 });
                }
                let k = locate_index(x, side.x0, self.b)?;
                self.walk(x, k, &side.data)
            }
            Kind::Annulus { r_in, r_out, data, .. } => {
                if data.contains(x) {
                    return Ok(IterationTrace { points: vec![x], exponent: 0 });
                }
                let m = self.band_exponent(x, *r_in, *r_out)?;
                self.walk(x, m, data)
            }
        }
    }

    fn walk(&self, x: f64, exponent: i32, data: &InitialData) -> Result<IterationTrace, Error> {
        let steps = exponent.unsigned_abs() as usize;
        if steps > ITERATION_CAP {
            return Err(Error::IterationCap(ITERATION_CAP));
        }
        let map = if exponent >= 0 {
            AffineMap::clockwise(self.b)
        } else {
            AffineMap::counterclockwise(self.b)
        };
        let mut points = Vec::with_capacity(steps + 1);
        let mut t = x;
        points.push(t);
        for _ in 0..steps {
            t = map.apply(t);
            points.push(t);
        }
        if !data.set().contains(t) && !data.set().closure_contains(t) {
            return Err(Error::Internal(format!(
                "trace from {x} ended at {t}, outside the initial set"
            )));
        }
        Ok(IterationTrace { points, exponent: exponent as i64 })
    }

    /// Unique `m` with `|b|^m |x - limit|` inside `[r_in, r_out)`, by a
    /// logarithmic guess corrected over the three neighboring integers.
    fn band_exponent(&self, x: f64, r_in: f64, r_out: f64) -> Result<i32, Error> {
        let limit = limit_point(self.b);
        let d = (x - limit).abs();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::OutOfDomain { x });
        }
        let ab = self.b.abs();
        let eps = if ab < 1.0 { r_out } else { r_in };
        let guess = ((d / eps).ln() / (1.0 / ab).ln()).round().clamp(-1e6, 1e6) as i32;
        for m in [guess - 1, guess, guess + 1] {
            let dm = ab.powi(m) * d;
            if dm >= r_in && dm < r_out {
                return Ok(m);
            }
        }
        Err(Error::OutOfDomain { x })
    }
}

fn wrap_unit(offset: f64) -> f64 {
    let f = offset - offset.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= SHAPE_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Validate the initial data against `b`, recover the anchor parameters,
/// and build a solvable problem.
pub fn make_problem(b: f64, initial: InitialData) -> Result<ShiftScaleProblem, Error> {
    let regime = regime_of(b)?;
    validate_initial_set(&EquationSpec::ShiftScale { b }, initial.set())?;
    let data = initial.canonical()?;
    let kind = match regime {
        Regime::BEqOne => {
            let parts = data.set().parts();
            let one = single_part(parts, "[x0, x0+1) (one unit-length interval)")?;
            if !close_rel(one.length(), 1.0) {
                return Err(Error::Shape {
                    expected: format!(
                        "[x0, x0+1) (a unit-length interval; got length {})",
                        one.length()
                    ),
                });
            }
            Kind::Periodic { x0: one.lo(), data }
        }
        Regime::BEqNegOne => {
            let parts = data.set().parts();
            let one = single_part(parts, "[1/2, x0+1) with x0 > -1/2")?;
            if (one.lo() - 0.5).abs() > 1e-12 {
                return Err(Error::Shape {
                    expected: format!("[1/2, x0+1) (left endpoint 1/2, got {})", one.lo()),
                });
            }
            Kind::Reflect { x0: one.hi() - 1.0, data }
        }
        Regime::BGtOne | Regime::BZeroOne => make_sided(b, &data)?,
        Regime::BNegOneZero | Regime::BLtNegOne => make_annulus(b, data)?,
    };
    Ok(ShiftScaleProblem { b, regime, kind })
}

fn single_part<'a>(parts: &'a [Interval], expected: &str) -> Result<&'a Interval, Error> {
    if parts.len() != 1 {
        return Err(Error::Shape { expected: expected.to_string() });
    }
    Ok(&parts[0])
}

/// Recover `x0` for one connected component of a `b > 0` initial set. The
/// component is `[b*x0, x0+1)` or `[x0+1, b*x0)` depending on which side
/// of the fixed abscissa the anchor falls; both recoveries are tried and
/// cross-checked against the other endpoint.
fn recover_anchor(b: f64, part: &Interval) -> Result<f64, Error> {
    let fixed = anchor_fixed_point(b);
    let scaled_first = part.lo() / b;
    let shifted_first = part.lo() - 1.0;
    let mut found = None;
    if close_rel(part.hi(), scaled_first + 1.0) && (scaled_first - fixed).abs() > 1e-12 {
        found = Some(scaled_first);
    }
    if close_rel(part.hi(), b * shifted_first) && (shifted_first - fixed).abs() > 1e-12 {
        if found.is_none() {
            found = Some(shifted_first);
        }
    }
    found.ok_or_else(|| Error::Shape {
        expected: format!(
            "[b*x0, x0+1) or [x0+1, b*x0) for a recoverable x0 != {fixed} (b={b})"
        ),
    })
}

fn make_sided(b: f64, data: &InitialData) -> Result<Kind, Error> {
    let parts = data.set().parts();
    if parts.is_empty() || parts.len() > 2 {
        return Err(Error::Shape {
            expected: "one or two intervals of the form [b*x0, x0+1) / [x0+1, b*x0)".to_string(),
        });
    }
    let fixed = anchor_fixed_point(b);
    let mut upper = None;
    let mut lower = None;
    for part in parts {
        let x0 = recover_anchor(b, part)?;
        let side = Side { x0, data: data.restrict_to(part)? };
        let slot = if x0 > fixed { &mut upper } else { &mut lower };
        if slot.is_some() {
            return Err(Error::Shape {
                expected: "at most one interval on each side of the fixed abscissa".to_string(),
            });
        }
        *slot = Some(side);
    }
    Ok(Kind::Sided { upper, lower })
}

fn make_annulus(b: f64, data: InitialData) -> Result<Kind, Error> {
    let expected = || {
        let limit = limit_point(b);
        let (inner, outer) = if b.abs() < 1.0 { ("|b|*eps", "eps") } else { ("eps", "|b|*eps") };
        format!(
            "two intervals [L-{outer}, L-{inner}) u [L+{inner}, L+{outer}) symmetric about the limit point L={limit}"
        )
    };
    let parts = data.set().parts();
    if parts.len() != 2 {
        return Err(Error::Shape { expected: expected() });
    }
    let limit = limit_point(b);
    let (left, right) = (&parts[0], &parts[1]);
    if !(left.hi() < limit && right.lo() > limit) {
        return Err(Error::Shape { expected: expected() });
    }
    let (in_l, out_l) = (limit - left.hi(), limit - left.lo());
    let (in_r, out_r) = (right.lo() - limit, right.hi() - limit);
    if !close_rel(in_l, in_r) || !close_rel(out_l, out_r) {
        return Err(Error::Shape { expected: expected() });
    }
    let (r_in, r_out) = (in_r, out_r);
    let ratio = b.abs().max(1.0 / b.abs());
    if !close_rel(r_out, ratio * r_in) {
        return Err(Error::Shape { expected: expected() });
    }
    let eps = if b.abs() < 1.0 { r_out } else { r_in };
    Ok(Kind::Annulus { eps, r_in, r_out, data })
}
