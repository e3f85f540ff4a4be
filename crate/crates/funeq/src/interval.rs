//! Real intervals with explicit endpoint closure and canonical disjoint
//! ordered unions of them.
//!
//! Membership is decided exactly from the four stored fields; no snap
//! tolerance is applied near endpoints, otherwise the partition properties
//! of the interval families would silently break.

use std::fmt;

use crate::error::Error;

/// A nonempty real interval with finite endpoints.
///
/// Either `lo < hi`, or `lo == hi` with both endpoints closed (a singleton).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self, Error> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInterval(format!(
                "endpoints must be finite, got {lo} and {hi}"
            )));
        }
        let ok = lo < hi || (lo == hi && lo_closed && hi_closed);
        if !ok {
            return Err(Error::InvalidInterval(format!(
                "need lo < hi (or a doubly-closed singleton), got lo={lo}, hi={hi}"
            )));
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    /// The canonical `[lo, hi)` form used for initial sets.
    pub fn closed_open(lo: f64, hi: f64) -> Result<Self, Error> {
        Self::new(lo, hi, true, false)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self, Error> {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self, Error> {
        Self::new(lo, hi, true, true)
    }

    pub fn singleton(x: f64) -> Result<Self, Error> {
        Self::new(x, x, true, true)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    /// Exact membership, respecting endpoint closure.
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Membership in the topological closure `[lo, hi]`.
    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Mirror image under `x -> -x`; endpoint closures swap sides.
    pub fn reflected(&self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    /// Same endpoints, closures rewritten to the canonical `[lo, hi)`
    /// convention. Singletons have no half-open form.
    pub fn canonical(&self) -> Result<Self, Error> {
        if self.is_singleton() {
            return Err(Error::Shape {
                expected: "a non-degenerate interval (singletons cannot carry initial data)"
                    .to_string(),
            });
        }
        Self::closed_open(self.lo, self.hi)
    }

    /// Intersection respecting closures; `None` when empty.
    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.intersection(other).is_some()
    }

    /// True when `self` is a subset of `other`.
    pub fn within(&self, other: &Self) -> bool {
        let lo_ok = self.lo > other.lo
            || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi
            || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }

    /// Parse `"[lo,hi)"`, `"(lo,hi]"`, `"(lo,hi)"` or `"[lo,hi]"`.
    /// Whitespace-tolerant.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let (iv, rest) = parse_one_interval(text.trim())?;
        if !rest.trim().is_empty() {
            return Err(Error::IntervalSyntax(format!(
                "unexpected trailing input `{}`",
                rest.trim()
            )));
        }
        Ok(iv)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// An ordered union of pairwise disjoint intervals.
///
/// Adjacent parts that share an endpoint with exactly one closed side are
/// merged by [`IntervalUnion::normalize`], so no `[a,b)` is ever followed
/// by `[b,c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    /// Sort, merge mergeable neighbors, and verify pairwise disjointness.
    pub fn normalize(parts: Vec<Interval>) -> Result<Self, Error> {
        if parts.is_empty() {
            return Err(Error::InvalidInterval("union must be nonempty".to_string()));
        }
        let mut sorted = parts;
        sort_parts(&mut sorted);
        let mut merged: Vec<Interval> = Vec::with_capacity(sorted.len());
        for next in sorted {
            let Some(cur) = merged.last_mut() else {
                merged.push(next);
                continue;
            };
            if next.lo < cur.hi || (next.lo == cur.hi && next.lo_closed && cur.hi_closed) {
                return Err(Error::Overlap { a: *cur, b: next });
            }
            if next.lo == cur.hi && (next.lo_closed ^ cur.hi_closed) {
                cur.hi = next.hi;
                cur.hi_closed = next.hi_closed;
            } else {
                merged.push(next);
            }
        }
        Ok(Self { parts: merged })
    }

    /// Permissive union: overlapping or touching parts are hulled together
    /// instead of rejected. Used for coverage computations.
    pub fn cover(parts: Vec<Interval>) -> Self {
        let mut sorted = parts;
        sort_parts(&mut sorted);
        let mut merged: Vec<Interval> = Vec::with_capacity(sorted.len());
        for next in sorted {
            let Some(cur) = merged.last_mut() else {
                merged.push(next);
                continue;
            };
            let touches = next.lo < cur.hi
                || (next.lo == cur.hi && (next.lo_closed || cur.hi_closed));
            if touches {
                if next.hi > cur.hi {
                    cur.hi = next.hi;
                    cur.hi_closed = next.hi_closed;
                } else if next.hi == cur.hi {
                    cur.hi_closed = cur.hi_closed || next.hi_closed;
                }
            } else {
                merged.push(next);
            }
        }
        Self { parts: merged }
    }

    pub fn single(iv: Interval) -> Self {
        Self { parts: vec![iv] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn closure_contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.closure_contains(x))
    }

    pub fn reflected(&self) -> Self {
        let mut parts: Vec<Interval> = self.parts.iter().map(Interval::reflected).collect();
        parts.reverse();
        Self { parts }
    }

    /// Smallest and largest endpoint values.
    pub fn bounds(&self) -> (f64, f64) {
        (self.parts[0].lo, self.parts[self.parts.len() - 1].hi)
    }

    pub fn total_length(&self) -> f64 {
        self.parts.iter().map(Interval::length).sum()
    }

    /// The sub-intervals of `domain` not covered by `self`.
    /// Degenerate gaps are reported as doubly-closed singletons.
    pub fn uncovered_within(&self, domain: &Interval) -> Vec<Interval> {
        let mut gaps = Vec::new();
        let mut pos = (domain.lo, domain.lo_closed);
        for part in &self.parts {
            if part.hi < domain.lo || part.lo > domain.hi {
                continue;
            }
            push_gap(&mut gaps, pos, (part.lo, !part.lo_closed), domain);
            let after = (part.hi, !part.hi_closed);
            if after.0 > pos.0 || (after.0 == pos.0 && pos.1 && !after.1) {
                pos = after;
            }
        }
        push_gap(&mut gaps, pos, (domain.hi, domain.hi_closed), domain);
        gaps
    }

    /// Parse a union such as `"(-1,-0.5] u [0.5,1)"`; parts joined with `u`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut rest = text.trim();
        let mut parts = Vec::new();
        loop {
            let (iv, tail) = parse_one_interval(rest)?;
            parts.push(iv);
            rest = tail.trim_start();
            if rest.is_empty() {
                break;
            }
            let Some(stripped) = rest.strip_prefix(['u', 'U']) else {
                return Err(Error::IntervalSyntax(format!(
                    "expected `u` between intervals, found `{rest}`"
                )));
            };
            rest = stripped.trim_start();
        }
        Self::normalize(parts)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "u")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn sort_parts(parts: &mut [Interval]) {
    parts.sort_by(|a, b| {
        a.lo.partial_cmp(&b.lo)
            .expect("finite endpoints")
            .then_with(|| b.lo_closed.cmp(&a.lo_closed))
            .then_with(|| a.hi.partial_cmp(&b.hi).expect("finite endpoints"))
    });
}

fn push_gap(
    gaps: &mut Vec<Interval>,
    lo: (f64, bool),
    hi: (f64, bool),
    domain: &Interval,
) {
    let lo = if lo.0 < domain.lo || (lo.0 == domain.lo && !domain.lo_closed && lo.1) {
        (domain.lo, domain.lo_closed)
    } else {
        lo
    };
    let hi = if hi.0 > domain.hi || (hi.0 == domain.hi && !domain.hi_closed && hi.1) {
        (domain.hi, domain.hi_closed)
    } else {
        hi
    };
    if let Ok(gap) = Interval::new(lo.0, hi.0, lo.1, hi.1) {
        gaps.push(gap);
    }
}

/// A possibly unbounded interval, used only on the reporting side (maximal
/// domains of existence). Unbounded ends are `None` and never participate
/// in computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Extent {
    pub fn all_reals() -> Self {
        Self { lo: None, hi: None, lo_closed: false, hi_closed: false }
    }

    /// `(x, inf)` or `[x, inf)`.
    pub fn above(x: f64, closed: bool) -> Self {
        Self { lo: Some(x), hi: None, lo_closed: closed, hi_closed: false }
    }

    /// `(-inf, x)` or `(-inf, x]`.
    pub fn below(x: f64, closed: bool) -> Self {
        Self { lo: None, hi: Some(x), lo_closed: false, hi_closed: closed }
    }

    pub fn bounded(iv: Interval) -> Self {
        Self {
            lo: Some(iv.lo),
            hi: Some(iv.hi),
            lo_closed: iv.lo_closed,
            hi_closed: iv.hi_closed,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = match self.lo {
            None => true,
            Some(lo) => {
                if self.lo_closed {
                    x >= lo
                } else {
                    x > lo
                }
            }
        };
        let below = match self.hi {
            None => true,
            Some(hi) => {
                if self.hi_closed {
                    x <= hi
                } else {
                    x < hi
                }
            }
        };
        above && below
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            Some(lo) => write!(f, "{}{}", if self.lo_closed { '[' } else { '(' }, lo)?,
            None => write!(f, "(-inf")?,
        }
        match self.hi {
            Some(hi) => write!(f, ",{}{}", hi, if self.hi_closed { ']' } else { ')' }),
            None => write!(f, ",inf)"),
        }
    }
}

/// Render a list of extents in the union syntax.
pub fn format_extents(parts: &[Extent]) -> String {
    parts
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("u")
}

fn parse_one_interval(text: &str) -> Result<(Interval, &str), Error> {
    let rest = text.trim_start();
    let mut chars = rest.chars();
    let lo_closed = match chars.next() {
        Some('[') => true,
        Some('(') => false,
        other => {
            return Err(Error::IntervalSyntax(format!(
                "expected `[` or `(`, found `{}`",
                other.map(String::from).unwrap_or_else(|| "end of input".to_string())
            )))
        }
    };
    let body = chars.as_str();
    let comma = body.find(',').ok_or_else(|| {
        Error::IntervalSyntax("expected `,` between the endpoints".to_string())
    })?;
    let lo = parse_number(&body[..comma])?;
    let tail = &body[comma + 1..];
    let close = tail.find([']', ')']).ok_or_else(|| {
        Error::IntervalSyntax("expected `]` or `)` to close the interval".to_string())
    })?;
    let hi = parse_number(&tail[..close])?;
    let hi_closed = tail.as_bytes()[close] == b']';
    let iv = Interval::new(lo, hi, lo_closed, hi_closed)?;
    Ok((iv, &tail[close + 1..]))
}

fn parse_number(text: &str) -> Result<f64, Error> {
    let trimmed = text.trim();
    trimmed
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::IntervalSyntax(format!("`{trimmed}` is not a finite number")))
}
