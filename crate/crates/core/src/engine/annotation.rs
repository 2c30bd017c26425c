use std::fmt;

use crate::model::{Seq, Substitution, Time};
use crate::parser::ExtendedAtom;

/// Upper end of an annotation interval. `Infinity` orders above every
/// finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Horizon {
    Finite(u64),
    Infinity,
}

impl Horizon {
    pub fn covers(self, x: u64) -> bool {
        match self {
            Horizon::Finite(h) => x <= h,
            Horizon::Infinity => true,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Horizon::Finite(h) => Some(h),
            Horizon::Infinity => None,
        }
    }
}

impl From<u64> for Horizon {
    fn from(h: u64) -> Self {
        Horizon::Finite(h)
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(h) => write!(f, "{h}"),
            Horizon::Infinity => f.write_str("inf"),
        }
    }
}

/// Arrival-count interval `[c#, h#]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountRange {
    pub c: Seq,
    pub h: Horizon,
}

impl CountRange {
    pub fn new(c: Seq, h: impl Into<Horizon>) -> Self {
        CountRange { c, h: h.into() }
    }

    pub fn contains(&self, k: Seq) -> bool {
        self.c <= k && self.h.covers(k)
    }
}

impl fmt::Display for CountRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}#,{}#]", self.c, self.h)
    }
}

/// The interval `[c, h]` of evaluation times during which a ground formula
/// is known to hold, optionally restricted to arrival counts `[c#, h#]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Annotation {
    pub c: Time,
    pub h: Horizon,
    pub count: Option<CountRange>,
}

impl Annotation {
    pub fn new(c: Time, h: impl Into<Horizon>) -> Self {
        Annotation {
            c,
            h: h.into(),
            count: None,
        }
    }

    /// `[c, inf]`.
    pub fn from(c: Time) -> Self {
        Annotation::new(c, Horizon::Infinity)
    }

    /// `[t, t]`.
    pub fn point(t: Time) -> Self {
        Annotation::new(t, t)
    }

    pub fn with_count(mut self, count: CountRange) -> Self {
        self.count = Some(count);
        self
    }

    /// Whether the formula holds at time `t` after `k` arrivals.
    pub fn holds_at(&self, t: Time, k: Seq) -> bool {
        self.c <= t && self.h.covers(t) && self.count.is_none_or(|r| r.contains(k))
    }

    pub fn intersect(&self, other: &Annotation) -> Annotation {
        let count = match (self.count, other.count) {
            (Some(a), Some(b)) => Some(CountRange {
                c: a.c.max(b.c),
                h: a.h.min(b.h),
            }),
            (a, b) => a.or(b),
        };
        Annotation {
            c: self.c.max(other.c),
            h: self.h.min(other.h),
            count,
        }
    }

    /// Whether the annotation can no longer hold at time `t` or any later
    /// time, with `k` arrivals seen so far.
    pub fn expired(&self, t: Time, k: Seq) -> bool {
        !self.h.covers(t) || self.count.is_some_and(|r| !r.h.covers(k))
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.c, self.h)?;
        if let Some(r) = self.count {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// A ground formula together with the substitution that produced it and
/// its annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedFormula {
    pub formula: ExtendedAtom,
    pub sigma: Substitution,
    pub ann: Annotation,
}

impl fmt::Display for AnnotatedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.formula, self.ann)
    }
}
