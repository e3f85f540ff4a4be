//! Limit-point computation, neighborhood-exclusion validation, and
//! well-posedness classification.
//!
//! A limit point of an equation is a point that iteration images of every
//! query accumulate on, so the equation imposes infinitely many
//! constraints on data near it. A well-posed initial set must keep a
//! strictly positive gap from every limit point; validation tests that
//! exactly on interval endpoints, with no user-supplied epsilon.

use crate::affine::limit_point;
use crate::error::Error;
use crate::expr::Expr;
use crate::interval::{Extent, Interval, IntervalUnion};
use crate::three_term::binomial_expand;

/// The five supported equation families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationSpec {
    /// `y(x+1) = y(bx)`, `b != 0`.
    ShiftScale { b: f64 },
    /// `y(x) = y(bx)`, `|b| != 0, 1`.
    PureScale { b: f64 },
    /// `y(x) = y(-x)`.
    EvenParity,
    /// `y(-x) = -y(x)`.
    OddParity,
    /// `y(3x) = y(x) + y(2x)`.
    ThreeTerm,
}

impl EquationSpec {
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            EquationSpec::ShiftScale { b } => {
                if *b == 0.0 {
                    return Err(Error::ZeroB);
                }
                if !b.is_finite() {
                    return Err(Error::Argument(format!("b must be finite, got {b}")));
                }
            }
            EquationSpec::PureScale { b } => {
                if *b == 0.0 {
                    return Err(Error::ZeroB);
                }
                if !b.is_finite() || b.abs() == 1.0 {
                    return Err(Error::Argument(format!("need |b| != 0, 1, got {b}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The limit points of constraint of the family. Scaling by `b` pins
    /// `b/(b-1)` unless `b` is `1` (pure shift) or `-1` (an involution);
    /// pure scaling and the three-term equation accumulate at zero; the
    /// parity equations have none.
    pub fn limit_points(&self) -> Vec<f64> {
        match self {
            EquationSpec::ShiftScale { b } => {
                if *b == 1.0 || *b == -1.0 {
                    Vec::new()
                } else {
                    vec![limit_point(*b)]
                }
            }
            EquationSpec::PureScale { .. } | EquationSpec::ThreeTerm => vec![0.0],
            EquationSpec::EvenParity | EquationSpec::OddParity => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EquationSpec::ShiftScale { .. } => "shift-scale",
            EquationSpec::PureScale { .. } => "scale",
            EquationSpec::EvenParity => "even",
            EquationSpec::OddParity => "odd",
            EquationSpec::ThreeTerm => "three-term",
        }
    }
}

/// Ok exactly when every limit point has strictly positive distance to the
/// initial set, i.e. lies outside its closure.
pub fn validate_initial_set(eq: &EquationSpec, i0: &IntervalUnion) -> Result<(), Error> {
    eq.validate()?;
    for l in eq.limit_points() {
        if i0.closure_contains(l) {
            return Err(Error::Penlp { limit_point: l });
        }
    }
    Ok(())
}

/// The infinite union of blocks `ratio^n * base` over all integers `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricBlocks {
    pub base: Interval,
    pub ratio: f64,
}

impl GeometricBlocks {
    pub fn block(&self, n: i32) -> Result<Interval, Error> {
        let s = self.ratio.powi(n);
        if !s.is_finite() || s == 0.0 {
            return Err(Error::Argument(format!("block index {n} out of range")));
        }
        let (a, b) = (self.base.lo() * s, self.base.hi() * s);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Interval::new(lo, hi, self.base.lo_closed(), self.base.hi_closed())
    }

    pub fn contains(&self, x: f64) -> bool {
        let d = x.abs();
        let (blo, bhi) = (self.base.lo().abs().min(self.base.hi().abs()), self.base.lo().abs().max(self.base.hi().abs()));
        if d == 0.0 || (x > 0.0) != (self.base.lo() > 0.0) {
            return false;
        }
        let guess = ((d / (blo * bhi).sqrt()).ln() / self.ratio.ln()).round();
        if !guess.is_finite() {
            return false;
        }
        let guess = guess.clamp(-1e6, 1e6) as i32;
        (guess - 1..=guess + 1)
            .any(|n| self.block(n).map(|iv| iv.contains(x)).unwrap_or(false))
    }
}

/// Verdict for an initial-value problem, per the spec of its family.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    WellPosed { i_max: Vec<Extent> },
    Overdetermined { redundant: Interval },
    Underdetermined { i_max: GeometricBlocks },
    PenlpViolation { limit_point: f64 },
}

/// Classify an initial interval `[a, c)` for a scaling family with
/// well-posedness ratio `rho` (`|b|` for pure scaling, `3` for the
/// three-term equation): `c = rho*a` is well-posed, longer is
/// overdetermined with the tail redundant, shorter extends uniquely only
/// to the geometric block union. The negative axis mirrors.
pub fn classify(eq: &EquationSpec, i0: Interval) -> Result<Classification, Error> {
    eq.validate()?;
    let ratio = match eq {
        EquationSpec::PureScale { b } => b.abs().max(1.0 / b.abs()),
        EquationSpec::ThreeTerm => 3.0,
        _ => {
            return Err(Error::Argument(
                "classification applies to the scaling families only".to_string(),
            ))
        }
    };
    let negative = if i0.lo() > 0.0 {
        false
    } else if i0.hi() < 0.0 {
        true
    } else {
        return Err(Error::Argument(
            "initial interval must lie strictly on one side of zero".to_string(),
        ));
    };
    let (a, c) = if negative { (-i0.hi(), -i0.lo()) } else { (i0.lo(), i0.hi()) };
    if (c - ratio * a).abs() <= 1e-12 * (ratio * a) {
        let i_max = match (eq, negative) {
            (EquationSpec::ThreeTerm, false) => vec![Extent::above(0.0, true)],
            (EquationSpec::ThreeTerm, true) => vec![Extent::below(0.0, true)],
            (_, false) => vec![Extent::above(0.0, false)],
            (_, true) => vec![Extent::below(0.0, false)],
        };
        return Ok(Classification::WellPosed { i_max });
    }
    if c > ratio * a {
        let redundant = if negative {
            Interval::new(-c, -ratio * a, i0.lo_closed(), i0.hi_closed())?
        } else {
            Interval::new(ratio * a, c, i0.lo_closed(), i0.hi_closed())?
        };
        return Ok(Classification::Overdetermined { redundant });
    }
    Ok(Classification::Underdetermined { i_max: GeometricBlocks { base: i0, ratio } })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessVerdict {
    Consistent,
    /// The first conflicting pair of candidate values, in depth order.
    Inconsistent { depth_a: u32, value_a: f64, depth_b: u32, value_b: f64 },
}

/// Candidate values of `y(x)` computed through initial data `f` at several
/// iteration depths. On data touching a limit point the candidates need
/// not agree; a conflict is the executable content of the limit point of
/// constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub point: f64,
    pub candidates: Vec<(u32, f64)>,
    pub verdict: WitnessVerdict,
}

pub fn constraint_witness(
    eq: &EquationSpec,
    f: &Expr,
    x: f64,
    depths: &[u32],
    tol: f64,
) -> Result<WitnessReport, Error> {
    eq.validate()?;
    if depths.is_empty() {
        return Err(Error::Argument("at least one depth is required".to_string()));
    }
    let mut seen = depths.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != depths.len() {
        return Err(Error::Argument("depths must be distinct".to_string()));
    }
    let mut candidates = Vec::with_capacity(depths.len());
    for &n in depths {
        let v = match eq {
            EquationSpec::ThreeTerm => binomial_expand(f, x, n)?,
            EquationSpec::PureScale { b } => f.eval(x * b.powi(-(n as i32)))?,
            _ => {
                return Err(Error::Argument(
                    "constraint witnesses apply to the scaling families only".to_string(),
                ))
            }
        };
        candidates.push((n, v));
    }
    let mut verdict = WitnessVerdict::Consistent;
    'outer: for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let (da, va) = candidates[i];
            let (db, vb) = candidates[j];
            if (va - vb).abs() > tol * (1.0 + va.abs()) {
                verdict = WitnessVerdict::Inconsistent {
                    depth_a: da,
                    value_a: va,
                    depth_b: db,
                    value_b: vb,
                };
                break 'outer;
            }
        }
    }
    Ok(WitnessReport { point: x, candidates, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_points_per_family() {
        assert_eq!(EquationSpec::ShiftScale { b: 2.0 }.limit_points(), vec![2.0]);
        assert!(EquationSpec::ShiftScale { b: 1.0 }.limit_points().is_empty());
        assert!(EquationSpec::ShiftScale { b: -1.0 }.limit_points().is_empty());
        assert_eq!(EquationSpec::PureScale { b: 2.0 }.limit_points(), vec![0.0]);
        assert_eq!(EquationSpec::ThreeTerm.limit_points(), vec![0.0]);
        assert!(EquationSpec::EvenParity.limit_points().is_empty());
        let lp = EquationSpec::ShiftScale { b: -0.5 }.limit_points()[0];
        assert!((lp - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn neighborhood_exclusion() {
        let eq = EquationSpec::PureScale { b: 2.0 };
        let touching = IntervalUnion::single(Interval::open(-0.5, 0.5).unwrap());
        assert_eq!(
            validate_initial_set(&eq, &touching),
            Err(Error::Penlp { limit_point: 0.0 })
        );
        let fine = IntervalUnion::single(Interval::closed_open(1.0, 2.0).unwrap());
        assert!(validate_initial_set(&eq, &fine).is_ok());
        // closure containment counts even when the point itself is excluded
        let closure_touch = IntervalUnion::single(Interval::open(0.0, 1.0).unwrap());
        assert!(validate_initial_set(&eq, &closure_touch).is_err());
    }

    #[test]
    fn shift_scale_exclusion_uses_the_limit_ordinate() {
        let eq = EquationSpec::ShiftScale { b: -0.5 };
        let touching = IntervalUnion::single(Interval::closed_open(0.0, 1.0).unwrap());
        match validate_initial_set(&eq, &touching) {
            Err(Error::Penlp { limit_point }) => assert!((limit_point - 1.0 / 3.0).abs() < 1e-15),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn classify_trichotomy() {
        let scale = EquationSpec::PureScale { b: 2.0 };
        let well = classify(&scale, Interval::closed_open(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(
            well,
            Classification::WellPosed { i_max: vec![Extent::above(0.0, false)] }
        );
        let over = classify(&scale, Interval::closed_open(1.0, 3.0).unwrap()).unwrap();
        assert_eq!(
            over,
            Classification::Overdetermined {
                redundant: Interval::closed_open(2.0, 3.0).unwrap()
            }
        );
        let under = classify(&scale, Interval::closed_open(1.0, 1.5).unwrap()).unwrap();
        match under {
            Classification::Underdetermined { i_max } => {
                assert_eq!(i_max.ratio, 2.0);
                assert_eq!(i_max.block(0).unwrap(), Interval::closed_open(1.0, 1.5).unwrap());
                assert_eq!(i_max.block(2).unwrap(), Interval::closed_open(4.0, 6.0).unwrap());
                assert!(i_max.contains(4.5));
                assert!(!i_max.contains(3.5));
                assert!(!i_max.contains(-4.5));
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn classify_three_term() {
        let eq = EquationSpec::ThreeTerm;
        let well = classify(&eq, Interval::closed_open(1.0, 3.0).unwrap()).unwrap();
        assert_eq!(well, Classification::WellPosed { i_max: vec![Extent::above(0.0, true)] });
        let over = classify(&eq, Interval::closed_open(1.0, 4.0).unwrap()).unwrap();
        assert_eq!(
            over,
            Classification::Overdetermined {
                redundant: Interval::closed_open(3.0, 4.0).unwrap()
            }
        );
        assert!(matches!(
            classify(&eq, Interval::closed_open(1.0, 2.0).unwrap()).unwrap(),
            Classification::Underdetermined { .. }
        ));
    }

    #[test]
    fn classify_negative_mirror_and_errors() {
        let eq = EquationSpec::PureScale { b: 2.0 };
        let well = classify(&eq, Interval::closed_open(-2.0, -1.0).unwrap()).unwrap();
        assert_eq!(well, Classification::WellPosed { i_max: vec![Extent::below(0.0, false)] });
        let over = classify(&eq, Interval::closed_open(-3.0, -1.0).unwrap()).unwrap();
        assert_eq!(
            over,
            Classification::Overdetermined {
                redundant: Interval::closed_open(-3.0, -2.0).unwrap()
            }
        );
        assert!(classify(&eq, Interval::closed_open(-1.0, 1.0).unwrap()).is_err());
        assert!(classify(&EquationSpec::EvenParity, Interval::closed_open(1.0, 2.0).unwrap())
            .is_err());
    }

    #[test]
    fn witness_quadratic_conflicts_linear_does_not() {
        let quad = Expr::parse("x^2").unwrap();
        let report =
            constraint_witness(&EquationSpec::ThreeTerm, &quad, 1.2, &[1, 2], 1e-9).unwrap();
        match report.verdict {
            WitnessVerdict::Inconsistent { value_a, value_b, .. } => {
                assert!((value_a - 0.80).abs() < 1e-12);
                assert!((value_b - 4.0 / 9.0).abs() < 1e-12);
            }
            WitnessVerdict::Consistent => panic!("expected a conflict"),
        }
        let lin = Expr::parse("2*x").unwrap();
        let report =
            constraint_witness(&EquationSpec::ThreeTerm, &lin, 1.2, &[1, 2, 3], 1e-9).unwrap();
        assert_eq!(report.verdict, WitnessVerdict::Consistent);
        for (_, v) in &report.candidates {
            assert!((v - 2.4).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_constant_data_on_pure_scale() {
        let constant = Expr::parse("2.5").unwrap();
        let report = constraint_witness(
            &EquationSpec::PureScale { b: 2.0 },
            &constant,
            5.0,
            &[3, 4, 5],
            1e-9,
        )
        .unwrap();
        assert_eq!(report.verdict, WitnessVerdict::Consistent);
        assert!(constraint_witness(&EquationSpec::ThreeTerm, &constant, 1.0, &[1, 1], 1e-9)
            .is_err());
    }
}
