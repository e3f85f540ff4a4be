//! Even/odd extension of data given on a representative set.
//!
//! A representative set must reach every point of the domain directly or
//! through reflection; the even equation additionally pins data at zero,
//! the odd equation forces the value zero there.

use crate::error::Error;
use crate::initial::InitialData;
use crate::interval::{Extent, Interval, IntervalUnion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The symmetric domain of the problem: `(-a, a)` or all of the reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityDomain {
    Symmetric(f64),
    AllReals,
}

impl ParityDomain {
    fn contains(&self, x: f64) -> bool {
        match self {
            ParityDomain::Symmetric(a) => x > -a && x < *a,
            ParityDomain::AllReals => x.is_finite(),
        }
    }
}

/// Where the representatives overlap their own reflection, the data is
/// spot-checked for symmetry consistency instead of rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub overlap: Vec<Interval>,
    pub samples: usize,
    pub max_mismatch: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone)]
pub struct ParityProblem {
    parity: Parity,
    domain: ParityDomain,
    data: InitialData,
}

impl ParityProblem {
    pub fn new(parity: Parity, domain: ParityDomain, data: InitialData) -> Result<Self, Error> {
        if let ParityDomain::Symmetric(a) = domain {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Argument(format!("domain half-width must be positive, got {a}")));
            }
            let hull = Interval::open(-a, a)?;
            for part in data.set().parts() {
                if !part.within(&hull) {
                    return Err(Error::Argument(format!(
                        "representative part {part} is not inside the domain (-{a},{a})"
                    )));
                }
            }
        }
        Ok(Self { parity, domain, data })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn rep_set(&self) -> &IntervalUnion {
        self.data.set()
    }

    /// Check reflection coverage of the domain. Positive-measure overlap of
    /// the representatives with their reflection yields a consistency
    /// report over 100 sampled points rather than an error.
    pub fn validate_rep_set(&self) -> Result<Option<ConsistencyReport>, Error> {
        let rep = self.data.set();
        let mirrored = rep.reflected();
        let mut both: Vec<Interval> = rep.parts().to_vec();
        both.extend_from_slice(mirrored.parts());
        let covered = IntervalUnion::cover(both);
        match self.domain {
            ParityDomain::Symmetric(a) => {
                let domain = Interval::open(-a, a)?;
                for gap in covered.uncovered_within(&domain) {
                    // reflection never reaches zero, so a pinhole there is a
                    // gap exactly when the parity rule cannot fill it: the odd
                    // rule pins y(0) = 0, the even rule needs 0 in the data
                    if self.parity == Parity::Odd && gap.is_singleton() && gap.lo() == 0.0 {
                        continue;
                    }
                    return Err(Error::Coverage { uncovered: Extent::bounded(gap) });
                }
            }
            ParityDomain::AllReals => {
                // finite representatives can never cover an unbounded domain
                let (lo, _) = covered.bounds();
                return Err(Error::Coverage { uncovered: Extent::below(lo, false) });
            }
        }
        Ok(self.overlap_report()?)
    }

    fn overlap_report(&self) -> Result<Option<ConsistencyReport>, Error> {
        let rep = self.data.set();
        let mirrored = rep.reflected();
        let mut overlap = Vec::new();
        for a in rep.parts() {
            for b in mirrored.parts() {
                if let Some(shared) = a.intersection(b) {
                    if !shared.is_singleton() {
                        overlap.push(shared);
                    }
                }
            }
        }
        if overlap.is_empty() {
            return Ok(None);
        }
        let total: f64 = overlap.iter().map(Interval::length).sum();
        let mut samples = 0usize;
        let mut max_mismatch = 0.0f64;
        let mut scale = 0.0f64;
        for part in &overlap {
            let want = ((100.0 * part.length() / total).ceil() as usize).max(1);
            for i in 0..want {
                let t = (i as f64 + 0.5) / want as f64;
                let x = part.lo() + t * part.length();
                let here = self.data.value_near(x)?;
                let there = self.data.value_near(-x)?;
                let mismatch = match self.parity {
                    Parity::Even => (here - there).abs(),
                    Parity::Odd => (here + there).abs(),
                };
                samples += 1;
                max_mismatch = max_mismatch.max(mismatch);
                scale = scale.max(here.abs()).max(there.abs());
            }
        }
        let consistent = max_mismatch <= 1e-9 * (1.0 + scale);
        Ok(Some(ConsistencyReport { overlap, samples, max_mismatch, consistent }))
    }

    /// The extension: data where given, reflected data elsewhere, with the
    /// sign flip and the pinned zero for odd problems.
    pub fn extend(&self, x: f64) -> Result<f64, Error> {
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain { x });
        }
        if self.data.contains(x) {
            return self.data.value_at(x);
        }
        match self.parity {
            Parity::Even => self.data.value_near(-x),
            Parity::Odd => {
                if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(-self.data.value_near(-x)?)
                }
            }
        }
    }
}
