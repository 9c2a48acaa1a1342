//! Finite unions of integer intervals over the positive integers.
//!
//! An [`IntervalSet`] is kept in canonical form: intervals sorted by their
//! lower bound, pairwise disjoint and never adjacent. Two sets are therefore
//! equal exactly when their interval lists are equal, which lets the lattice
//! and the solvers hash and compare knowledge sets structurally.
//!
//! The universe is `{1, 2, 3, ...}`. The last interval may be unbounded.
//!
//! ```
//! use paramgame::IntervalSet;
//!
//! let not_two: IntervalSet = "1,3-*".parse().unwrap();
//! let one = IntervalSet::singleton(1);
//! assert!(one.is_subset(&not_two));
//! assert_eq!(IntervalSet::full().difference(&not_two).to_string(), "2");
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Sentinel upper bound for an unbounded interval.
const INF: u64 = u64::MAX;

/// Largest finite value accepted in a set.
pub const MAX_FINITE: u64 = u64::MAX - 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalParseError {
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("opponent counts start at 1, found 0")]
    Zero,
    #[error("empty item in `{0}`")]
    EmptyItem(String),
    #[error("interval {lo}-{hi} has lower bound above upper bound")]
    Reversed { lo: u64, hi: u64 },
    #[error("integer {0} is too large")]
    TooLarge(u64),
}

/// A canonical finite union of intervals of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntervalSet {
    // Inclusive bounds; `hi == INF` marks an unbounded tail.
    intervals: Vec<(u64, u64)>,
}

impl IntervalSet {
    /// The empty set.
    pub fn empty() -> Self {
        IntervalSet {
            intervals: Vec::new(),
        }
    }

    /// All positive integers.
    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(1, INF)],
        }
    }

    pub fn singleton(k: u64) -> Self {
        Self::range(k, k)
    }

    /// `{lo, ..., hi}`; empty when `lo > hi`. `lo` is clamped to 1.
    pub fn range(lo: u64, hi: u64) -> Self {
        let lo = lo.max(1);
        assert!(hi <= MAX_FINITE, "finite bound {hi} out of range");
        if lo > hi {
            return Self::empty();
        }
        IntervalSet {
            intervals: vec![(lo, hi)],
        }
    }

    /// `{k : k >= lo}`.
    pub fn at_least(lo: u64) -> Self {
        let lo = lo.max(1);
        assert!(lo <= MAX_FINITE, "bound {lo} out of range");
        IntervalSet {
            intervals: vec![(lo, INF)],
        }
    }

    /// `{k : k > bound}`.
    pub fn greater_than(bound: u64) -> Self {
        Self::at_least(bound + 1)
    }

    /// `{k : k < bound}`.
    pub fn less_than(bound: u64) -> Self {
        if bound <= 1 {
            Self::empty()
        } else {
            Self::range(1, bound - 1)
        }
    }

    /// Builds a canonical set from arbitrary inclusive intervals. `None` as an
    /// upper bound means unbounded. Empty or reversed pairs are dropped.
    pub fn from_intervals<I>(items: I) -> Self
    where
        I: IntoIterator<Item = (u64, Option<u64>)>,
    {
        let mut raw: Vec<(u64, u64)> = items
            .into_iter()
            .map(|(lo, hi)| (lo.max(1), hi.unwrap_or(INF)))
            .filter(|&(lo, hi)| lo <= hi)
            .collect();
        raw.sort_unstable();
        let mut intervals: Vec<(u64, u64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if last.1 == INF || lo <= last.1 + 1 => {
                    last.1 = last.1.max(hi);
                }
                _ => intervals.push((lo, hi)),
            }
        }
        IntervalSet { intervals }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0] == (1, INF)
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.last().is_none_or(|&(_, hi)| hi != INF)
    }

    pub fn contains(&self, k: u64) -> bool {
        let idx = self.intervals.partition_point(|&(_, hi)| hi < k);
        self.intervals.get(idx).is_some_and(|&(lo, _)| lo <= k)
    }

    /// Smallest element, if any.
    pub fn min_element(&self) -> Option<u64> {
        self.intervals.first().map(|&(lo, _)| lo)
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    /// Inclusive bounds of each interval; `None` marks the unbounded tail.
    pub fn intervals(&self) -> impl Iterator<Item = (u64, Option<u64>)> + '_ {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (lo, if hi == INF { None } else { Some(hi) }))
    }

    pub fn union(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && !b)
    }

    /// Complement with respect to the positive integers.
    pub fn complement(&self) -> Self {
        Self::full().difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        // Every interval of `self` must sit inside a single interval of
        // `other`, since the canonical form has no adjacent pieces.
        let mut j = 0;
        for &(lo, hi) in &self.intervals {
            while j < other.intervals.len() && other.intervals[j].1 < lo {
                j += 1;
            }
            match other.intervals.get(j) {
                Some(&(olo, ohi)) if olo <= lo && hi <= ohi => {}
                _ => return false,
            }
        }
        true
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }
}

/// Pointwise boolean combination of two sets by a sweep over the boundary
/// points of both operands.
fn combine(a: &IntervalSet, b: &IntervalSet, op: impl Fn(bool, bool) -> bool) -> IntervalSet {
    // Half-open segments [start, end); end == INF means unbounded.
    fn half_open(s: &IntervalSet) -> impl Iterator<Item = (u64, u64)> + '_ {
        s.intervals
            .iter()
            .map(|&(lo, hi)| (lo, if hi == INF { INF } else { hi + 1 }))
    }
    let sa: Vec<(u64, u64)> = half_open(a).collect();
    let sb: Vec<(u64, u64)> = half_open(b).collect();

    let mut points: Vec<u64> = Vec::with_capacity(2 * (sa.len() + sb.len()) + 1);
    points.push(1);
    for &(s, e) in sa.iter().chain(sb.iter()) {
        points.push(s);
        if e != INF {
            points.push(e);
        }
    }
    points.sort_unstable();
    points.dedup();

    let member = |segs: &[(u64, u64)], idx: &mut usize, p: u64| -> bool {
        while *idx < segs.len() && segs[*idx].1 <= p {
            *idx += 1;
        }
        *idx < segs.len() && segs[*idx].0 <= p
    };

    let mut out: Vec<(u64, u64)> = Vec::new();
    let (mut ia, mut ib) = (0usize, 0usize);
    for (k, &p) in points.iter().enumerate() {
        let end = points.get(k + 1).copied().unwrap_or(INF);
        if op(member(&sa, &mut ia, p), member(&sb, &mut ib, p)) {
            match out.last_mut() {
                Some(last) if last.1 == p => last.1 = end,
                _ => out.push((p, end)),
            }
        }
    }
    IntervalSet {
        intervals: out
            .into_iter()
            .map(|(s, e)| (s, if e == INF { INF } else { e - 1 }))
            .collect(),
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return f.write_str("*");
        }
        for (i, &(lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if hi == INF {
                write!(f, "{lo}-*")?;
            } else if lo == hi {
                write!(f, "{lo}")?;
            } else {
                write!(f, "{lo}-{hi}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

fn parse_count(text: &str) -> Result<u64, IntervalParseError> {
    if text.is_empty() || !text.bytes().all(|c| c.is_ascii_digit()) {
        return Err(IntervalParseError::BadInteger(text.to_string()));
    }
    let value: u64 = text
        .parse()
        .map_err(|_| IntervalParseError::BadInteger(text.to_string()))?;
    match value {
        0 => Err(IntervalParseError::Zero),
        v if v > MAX_FINITE => Err(IntervalParseError::TooLarge(v)),
        v => Ok(v),
    }
}

impl FromStr for IntervalSet {
    type Err = IntervalParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        if text == "*" {
            return Ok(Self::full());
        }
        let mut items = Vec::new();
        for item in text.split(',') {
            let item = item.trim();
            if item.is_empty() {
                return Err(IntervalParseError::EmptyItem(text.to_string()));
            }
            match item.split_once('-') {
                None => {
                    let k = parse_count(item)?;
                    items.push((k, Some(k)));
                }
                Some((lo, hi)) => {
                    let lo = parse_count(lo.trim())?;
                    let hi = hi.trim();
                    if hi == "*" {
                        items.push((lo, None));
                    } else {
                        let hi = parse_count(hi)?;
                        if lo > hi {
                            return Err(IntervalParseError::Reversed { lo, hi });
                        }
                        items.push((lo, Some(hi)));
                    }
                }
            }
        }
        Ok(Self::from_intervals(items))
    }
}
