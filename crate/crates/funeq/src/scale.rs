//! Solver for `y(x) = y(bx)` with `|b| > 1` (the equation is invariant
//! under `b -> 1/b`, so smaller magnitudes are normalized away).
//!
//! Every orbit `{b^m x}` meets a well-shaped initial band exactly once, so
//! evaluation is one power search. Zero is the limit point and is never
//! solvable.

use crate::error::Error;
use crate::initial::InitialData;
use crate::interval::{Interval, IntervalUnion};
use crate::penlp::{classify, validate_initial_set, Classification, EquationSpec};

const SHAPE_RTOL: f64 = 1e-9;

/// Which halves of the real line carry data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleSides {
    Positive,
    Negative,
    Both,
}

#[derive(Debug, Clone)]
struct ScaleSide {
    base: Interval,
    data: InitialData,
}

#[derive(Debug, Clone)]
enum ScaleKind {
    /// `b > 1`: independent positive/negative sides, each a band
    /// `[a, c)` with `c <= b*a` (equality is the well-posed shape; a
    /// shorter band covers only the geometric block union).
    Directional { pos: Option<ScaleSide>, neg: Option<ScaleSide> },
    /// `b < -1`: one symmetric two-piece band `[eps, |b|*eps)` in
    /// magnitude; signed powers of `b` alternate between the pieces.
    Alternating { eps: f64, data: InitialData },
}

#[derive(Debug, Clone)]
pub struct ScaleProblem {
    b: f64,
    kind: ScaleKind,
}

impl ScaleProblem {
    /// The normalized scale factor, always `|b| > 1`.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn sides(&self) -> ScaleSides {
        match &self.kind {
            ScaleKind::Directional { pos: Some(_), neg: Some(_) } => ScaleSides::Both,
            ScaleKind::Directional { pos: Some(_), neg: None } => ScaleSides::Positive,
            ScaleKind::Directional { pos: None, .. } => ScaleSides::Negative,
            ScaleKind::Alternating { .. } => ScaleSides::Both,
        }
    }

    pub fn initial_set(&self) -> IntervalUnion {
        match &self.kind {
            ScaleKind::Directional { pos, neg } => {
                let mut parts = Vec::new();
                for side in [neg, pos].into_iter().flatten() {
                    parts.extend_from_slice(side.data.set().parts());
                }
                IntervalUnion::normalize(parts).expect("validated sides are disjoint")
            }
            ScaleKind::Alternating { data, .. } => data.set().clone(),
        }
    }

    /// `f(b^m x)` for the unique signed power landing in the initial band.
    pub fn evaluate(&self, x: f64) -> Result<f64, Error> {
        if x == 0.0 || !x.is_finite() {
            return Err(Error::OutOfDomain { x });
        }
        match &self.kind {
            ScaleKind::Directional { pos, neg } => {
                let side = if x > 0.0 { pos.as_ref() } else { neg.as_ref() };
                let side = side.ok_or(Error::OutOfDomain { x })?;
                if side.data.contains(x) {
                    return side.data.value_at(x);
                }
                let m = band_power(x, self.b, &side.base)?;
                side.data.value_near(self.b.powi(m) * x)
            }
            ScaleKind::Alternating { eps, data } => {
                if data.contains(x) {
                    return data.value_at(x);
                }
                let ab = self.b.abs();
                let d = x.abs();
                let guess = ((*eps * ab.sqrt() / d).ln() / ab.ln()).round().clamp(-1e6, 1e6) as i32;
                for m in [guess - 1, guess, guess + 1] {
                    let dm = ab.powi(m) * d;
                    if dm >= *eps && dm < ab * *eps {
                        return data.value_near(self.b.powi(m) * x);
                    }
                }
                Err(Error::OutOfDomain { x })
            }
        }
    }
}

/// Unique `m` with `b^m x` inside `base`; logarithmic guess plus membership
/// correction. `None` of the three candidates matching means `x` sits in a
/// gap of an underdetermined problem.
fn band_power(x: f64, b: f64, base: &Interval) -> Result<i32, Error> {
    let center = (base.lo().abs() * base.hi().abs()).sqrt();
    let guess = ((center / x.abs()).ln() / b.ln()).round().clamp(-1e6, 1e6) as i32;
    for m in [guess - 1, guess, guess + 1] {
        if base.contains(b.powi(m) * x) {
            return Ok(m);
        }
    }
    Err(Error::OutOfDomain { x })
}

/// Validate initial data for `y(x) = y(bx)` and build a solvable problem.
pub fn make_scale_problem(b: f64, initial: InitialData) -> Result<ScaleProblem, Error> {
    if b == 0.0 || !b.is_finite() || b.abs() == 1.0 {
        return Err(Error::Argument(format!("need a finite b with |b| != 0, 1, got {b}")));
    }
    let b = if b.abs() < 1.0 { 1.0 / b } else { b };
    validate_initial_set(&EquationSpec::PureScale { b }, initial.set())?;
    let data = initial.canonical()?;
    let kind = if b > 1.0 {
        let mut pos = None;
        let mut neg = None;
        for part in data.set().parts() {
            let (magnitudes, slot) = if part.lo() > 0.0 {
                ((part.lo(), part.hi()), &mut pos)
            } else {
                ((-part.hi(), -part.lo()), &mut neg)
            };
            let (inner, outer) = magnitudes;
            if outer > b * inner && !close_rel(outer, b * inner) {
                return Err(Error::Shape {
                    expected: format!(
                        "a band no longer than [a, {b}*a) per side (data on [{inner}, {outer}) is overdetermined)"
                    ),
                });
            }
            if slot.is_some() {
                return Err(Error::Shape {
                    expected: "at most one band on each side of zero".to_string(),
                });
            }
            *slot = Some(ScaleSide { base: *part, data: data.restrict_to(part)? });
        }
        ScaleKind::Directional { pos, neg }
    } else {
        let parts = data.set().parts();
        let expected = || {
            format!("two pieces [-{0}*eps, -eps) u [eps, {0}*eps) symmetric about zero", b.abs())
        };
        if parts.len() != 2 {
            return Err(Error::Shape { expected: expected() });
        }
        let (left, right) = (&parts[0], &parts[1]);
        if !(left.hi() < 0.0 && right.lo() > 0.0) {
            return Err(Error::Shape { expected: expected() });
        }
        let eps = right.lo();
        let ab = b.abs();
        if !close_rel(right.hi(), ab * eps)
            || !close_rel(-left.hi(), eps)
            || !close_rel(-left.lo(), ab * eps)
        {
            return Err(Error::Shape { expected: expected() });
        }
        ScaleKind::Alternating { eps, data }
    };
    Ok(ScaleProblem { b, kind })
}

/// Trichotomy for data on `[a, c)` under `y(x) = y(bx)`, `b > 1`.
pub fn classify_interval(a: f64, c: f64, b: f64) -> Result<Classification, Error> {
    if !(b > 1.0) {
        return Err(Error::Argument(format!("classification requires b > 1, got {b}")));
    }
    if !(a > 0.0) || !(c > a) {
        return Err(Error::Argument(format!("need 0 < a < c, got a={a}, c={c}")));
    }
    classify(&EquationSpec::PureScale { b }, Interval::closed_open(a, c)?)
}

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= SHAPE_RTOL * a.abs().max(b.abs()).max(1.0)
}
