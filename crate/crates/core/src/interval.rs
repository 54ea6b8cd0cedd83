use serde::Serialize;

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::input(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Sorted, pairwise disjoint closed intervals.
///
/// Overlapping or touching parts are merged on construction, so consecutive
/// parts always satisfy `p.hi < q.lo`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut all: Vec<Interval> = intervals.into_iter().collect();
        all.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut parts: Vec<Interval> = Vec::with_capacity(all.len());
        for iv in all {
            match parts.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => parts.push(iv),
            }
        }
        IntervalUnion { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Smallest single interval covering every part.
    pub fn hull(&self) -> Option<Interval> {
        Some(Interval { lo: self.parts.first()?.lo, hi: self.parts.last()?.hi })
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x, slack))
    }

    /// Every part lies inside some part of `other`, up to `slack`.
    pub fn is_subset_of(&self, other: &IntervalUnion, slack: f64) -> bool {
        self.parts.iter().all(|p| {
            other.parts.iter().any(|q| q.lo - slack <= p.lo && p.hi <= q.hi + slack)
        })
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::from_intervals(self.parts.iter().chain(&other.parts).copied())
    }

    pub fn translate(&self, c: f64) -> IntervalUnion {
        Self::from_intervals(self.parts.iter().map(|p| Interval { lo: p.lo + c, hi: p.hi + c }))
    }
}
