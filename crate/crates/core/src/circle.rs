//! Exact point sets on the model circle.
//!
//! The circle has circumference 2. The closed arc `I = [0, 1]` carries the
//! middle-thirds Cantor apparatus and the open arc `U0 = (1, 2)` is its
//! complement. The choice of circumference is a convention: nothing in the
//! constructions depends on the length of `U0`.
//!
//! Every set is a finite union of intervals with exact rational endpoints.
//! Internally sets are handled as sorted lists of *segments* of the half-open
//! line `[0, 2)`; an interval crossing the seam at `0 == 2` becomes two
//! segments and is folded back when a result is canonicalized.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number used for every coordinate in the crate.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleError {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("cannot parse rational {0:?}: expected \"p/q\" or an integer")]
    Parse(String),
}

/// Shorthand for `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, CircleError> {
    let t = text.trim();
    let err = || CircleError::Parse(text.to_string());
    let valid_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    match t.split_once('/') {
        Some((p, q)) => {
            if !valid_int(p) || !valid_int(q) {
                return Err(err());
            }
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            if !valid_int(t) {
                return Err(err());
            }
            Ok(Rational::from_integer(t.parse().map_err(|_| err())?))
        }
    }
}

/// Always `"p/q"`, including integers (`"0/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn circumference() -> Rational {
    int(2)
}

/// `#[serde(with = "...")]` adapter writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// A point of the circle, stored as its representative in `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(Rational);

impl RationalPoint {
    pub fn new(value: Rational) -> Self {
        let two = circumference();
        let turns = (&value / &two).floor();
        RationalPoint(value - turns * two)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }
}

impl From<Rational> for RationalPoint {
    fn from(v: Rational) -> Self {
        RationalPoint::new(v)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Connected piece of the line `[0, 2)`; `hi == 2` is only allowed open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Seg {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Seg {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        Seg {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// Orders by left end; a closed end starts before an open one at the same point.
    pub fn cmp_start(&self, other: &Seg) -> std::cmp::Ordering {
        self.lo
            .cmp(&other.lo)
            .then(other.lo_closed.cmp(&self.lo_closed))
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// Image under `x -> slope * x + offset`, endpoints swapped for negative slopes.
    pub fn affine(&self, slope: &Rational, offset: &Rational) -> Seg {
        let a = slope * &self.lo + offset;
        let b = slope * &self.hi + offset;
        if slope.is_positive() {
            Seg::new(a, b, self.lo_closed, self.hi_closed)
        } else {
            Seg::new(b, a, self.hi_closed, self.lo_closed)
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// A connected subset of the circle.
///
/// A non-wrapping interval satisfies `lo <= hi`. A wrapping interval runs
/// from `lo` up to the seam and continues from `0` to `hi`; `(a, 2)` is the
/// wrapping interval with `hi = 0` open. The whole circle is the wrapping
/// interval `[0, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRecord", into = "IntervalRecord")]
pub struct Interval {
    lo: RationalPoint,
    hi: RationalPoint,
    lo_closed: bool,
    hi_closed: bool,
    wraps: bool,
}

impl Interval {
    pub fn new(
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
        wraps: bool,
    ) -> Result<Self, CircleError> {
        let two = circumference();
        for v in [&lo, &hi] {
            if v.is_negative() || *v >= two {
                return Err(CircleError::InvalidInterval(format!(
                    "endpoint {v} outside [0, 2)"
                )));
            }
        }
        if !wraps {
            match lo.cmp(&hi) {
                Ordering::Greater => {
                    return Err(CircleError::InvalidInterval(format!(
                        "lo {lo} exceeds hi {hi} on a non-wrapping interval"
                    )))
                }
                Ordering::Equal if !(lo_closed && hi_closed) => {
                    return Err(CircleError::InvalidInterval(format!(
                        "degenerate interval at {lo} must be closed at both ends"
                    )))
                }
                _ => {}
            }
        } else if hi > lo {
            return Err(CircleError::InvalidInterval(format!(
                "wrapping interval from {lo} to {hi} covers part of the circle twice"
            )));
        }
        Ok(Interval {
            lo: RationalPoint(lo),
            hi: RationalPoint(hi),
            lo_closed,
            hi_closed,
            wraps,
        })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, CircleError> {
        Interval::new(lo, hi, true, true, false)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self, CircleError> {
        Interval::new(lo, hi, false, false, false)
    }

    pub fn point(x: Rational) -> Result<Self, CircleError> {
        Interval::new(x.clone(), x, true, true, false)
    }

    pub fn lo(&self) -> &Rational {
        self.lo.value()
    }

    pub fn hi(&self) -> &Rational {
        self.hi.value()
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn wraps(&self) -> bool {
        self.wraps
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn length(&self) -> Rational {
        if self.wraps {
            circumference() - self.lo() + self.hi()
        } else {
            self.hi() - self.lo()
        }
    }

    /// A point of the interval halfway along it.
    pub fn midpoint(&self) -> Rational {
        let mid = self.lo() + self.length() / int(2);
        RationalPoint::new(mid).into_value()
    }

    pub(crate) fn segments(&self) -> Vec<Seg> {
        if !self.wraps {
            return vec![Seg::new(
                self.lo().clone(),
                self.hi().clone(),
                self.lo_closed,
                self.hi_closed,
            )];
        }
        let upper = Seg::new(self.lo().clone(), circumference(), self.lo_closed, false);
        let lower = Seg::new(Rational::zero(), self.hi().clone(), true, self.hi_closed);
        [lower, upper]
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect()
    }

    fn from_seg(s: &Seg) -> Interval {
        debug_assert!(s.hi < circumference());
        Interval {
            lo: RationalPoint(s.lo.clone()),
            hi: RationalPoint(s.hi.clone()),
            lo_closed: s.lo_closed,
            hi_closed: s.hi_closed,
            wraps: false,
        }
    }

    /// Like `from_seg`, but a segment running up to the seam becomes the
    /// wrapping interval that stops (open) at `0`.
    pub(crate) fn from_seg_any(s: &Seg) -> Interval {
        if s.hi == circumference() {
            Interval {
                lo: RationalPoint(s.lo.clone()),
                hi: RationalPoint(Rational::zero()),
                lo_closed: s.lo_closed,
                hi_closed: false,
                wraps: true,
            }
        } else {
            Interval::from_seg(s)
        }
    }

    /// The interval as a single segment of `[0, 2)`, if it does not cross the seam.
    pub(crate) fn as_seg(&self) -> Option<Seg> {
        let mut segs = self.segments();
        if segs.len() == 1 {
            segs.pop()
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        let w = if self.wraps { "~" } else { "" };
        write!(f, "{l}{}, {w}{}{r}", self.lo(), self.hi())
    }
}

/// Wire form of an [`Interval`]: endpoints as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
    pub lo_closed: bool,
    pub hi_closed: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub wraps: bool,
}

impl TryFrom<IntervalRecord> for Interval {
    type Error = CircleError;

    fn try_from(r: IntervalRecord) -> Result<Self, Self::Error> {
        Interval::new(
            parse_rational(&r.lo)?,
            parse_rational(&r.hi)?,
            r.lo_closed,
            r.hi_closed,
            r.wraps,
        )
    }
}

impl From<Interval> for IntervalRecord {
    fn from(i: Interval) -> Self {
        IntervalRecord {
            lo: format_rational(i.lo()),
            hi: format_rational(i.hi()),
            lo_closed: i.lo_closed,
            hi_closed: i.hi_closed,
            wraps: i.wraps,
        }
    }
}

/// A finite union of intervals in canonical form: pairwise disjoint, sorted
/// by `lo`, with every mergeable pair merged. Two sets are equal as point
/// sets exactly when their canonical forms are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalSet {
    fn from(raw: Vec<Interval>) -> Self {
        canonicalize(&raw)
    }
}

impl From<IntervalSet> for Vec<Interval> {
    fn from(s: IntervalSet) -> Self {
        s.intervals
    }
}

impl From<Interval> for IntervalSet {
    fn from(i: Interval) -> Self {
        canonicalize(std::slice::from_ref(&i))
    }
}

/// Canonical form of an arbitrary list of intervals.
pub fn canonicalize(raw: &[Interval]) -> IntervalSet {
    let segs: Vec<Seg> = raw.iter().flat_map(Interval::segments).collect();
    IntervalSet::from_raw_segs(segs)
}

/// Sorts and merges overlapping or abutting segments.
pub(crate) fn merge_segs(mut segs: Vec<Seg>) -> Vec<Seg> {
    segs.retain(|s| !s.is_empty());
    segs.sort_by(Seg::cmp_start);
    let mut out: Vec<Seg> = Vec::with_capacity(segs.len());
    for s in segs {
        if let Some(cur) = out.last_mut() {
            let joins = match s.lo.cmp(&cur.hi) {
                Ordering::Less => true,
                Ordering::Equal => cur.hi_closed || s.lo_closed,
                Ordering::Greater => false,
            };
            if joins {
                match s.hi.cmp(&cur.hi) {
                    Ordering::Greater => {
                        cur.hi = s.hi;
                        cur.hi_closed = s.hi_closed;
                    }
                    Ordering::Equal => cur.hi_closed |= s.hi_closed,
                    Ordering::Less => {}
                }
                continue;
            }
        }
        out.push(s);
    }
    out
}

/// Parts of `segs` inside `window`. `segs` must be merged.
pub(crate) fn clip(segs: &[Seg], window: &Seg) -> Vec<Seg> {
    let start = segs.partition_point(|s| s.hi < window.lo);
    let mut out = Vec::new();
    for s in &segs[start..] {
        if s.lo > window.hi {
            break;
        }
        let (lo, lo_closed) = match s.lo.cmp(&window.lo) {
            Ordering::Greater => (s.lo.clone(), s.lo_closed),
            Ordering::Less => (window.lo.clone(), window.lo_closed),
            Ordering::Equal => (s.lo.clone(), s.lo_closed && window.lo_closed),
        };
        let (hi, hi_closed) = match s.hi.cmp(&window.hi) {
            Ordering::Less => (s.hi.clone(), s.hi_closed),
            Ordering::Greater => (window.hi.clone(), window.hi_closed),
            Ordering::Equal => (s.hi.clone(), s.hi_closed && window.hi_closed),
        };
        let piece = Seg::new(lo, hi, lo_closed, hi_closed);
        if !piece.is_empty() {
            out.push(piece);
        }
    }
    out
}

/// Index of the segment containing `x`, if any. `segs` must be merged.
pub(crate) fn locate_point(segs: &[Seg], x: &Rational) -> Option<usize> {
    let idx = segs.partition_point(|s| s.hi < *x);
    (idx..segs.len().min(idx + 2)).find(|&i| segs[i].contains(x))
}

/// Whether the open gap `(a, b)`, which contains no endpoint of `segs`, lies in the set.
fn covers_gap(segs: &[Seg], a: &Rational) -> bool {
    let idx = segs.partition_point(|s| s.hi <= *a);
    segs.get(idx).is_some_and(|s| s.lo <= *a)
}

/// Pointwise boolean combination of two merged segment lists.
fn combine(a: &[Seg], b: &[Seg], op: impl Fn(bool, bool) -> bool) -> Vec<Seg> {
    let mut cuts: Vec<Rational> = Vec::with_capacity(2 * (a.len() + b.len()) + 2);
    cuts.push(Rational::zero());
    cuts.push(circumference());
    for s in a.iter().chain(b) {
        cuts.push(s.lo.clone());
        cuts.push(s.hi.clone());
    }
    cuts.sort();
    cuts.dedup();

    let mut out = Vec::new();
    let mut cur: Option<Seg> = None;
    let mut flush = |cur: &mut Option<Seg>| {
        if let Some(s) = cur.take() {
            out.push(s);
        }
    };
    for w in cuts.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        // the point p, then the open gap (p, q)
        if op(locate_point(a, p).is_some(), locate_point(b, p).is_some()) {
            match cur.as_mut() {
                Some(c) => {
                    c.hi = p.clone();
                    c.hi_closed = true;
                }
                None => cur = Some(Seg::new(p.clone(), p.clone(), true, true)),
            }
        } else {
            flush(&mut cur);
        }
        if op(covers_gap(a, p), covers_gap(b, p)) {
            match cur.as_mut() {
                Some(c) => {
                    c.hi = q.clone();
                    c.hi_closed = false;
                }
                None => cur = Some(Seg::new(p.clone(), q.clone(), false, false)),
            }
        } else {
            flush(&mut cur);
        }
    }
    flush(&mut cur);
    out
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet::from_raw_segs(vec![Seg::new(
            Rational::zero(),
            circumference(),
            true,
            false,
        )])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.intervals.len()
    }

    pub(crate) fn segs(&self) -> Vec<Seg> {
        let mut segs: Vec<Seg> = self.intervals.iter().flat_map(Interval::segments).collect();
        segs.sort_by(Seg::cmp_start);
        segs
    }

    pub(crate) fn from_raw_segs(segs: Vec<Seg>) -> Self {
        IntervalSet::fold(merge_segs(segs))
    }

    /// Folds merged segments of `[0, 2)` back onto the circle.
    fn fold(segs: Vec<Seg>) -> Self {
        let two = circumference();
        let Some(last) = segs.last() else {
            return IntervalSet::empty();
        };
        if last.hi != two {
            return IntervalSet {
                intervals: segs.iter().map(Interval::from_seg).collect(),
            };
        }
        let first = &segs[0];
        let first_at_seam = first.lo.is_zero() && first.lo_closed;
        let wrap = if segs.len() == 1 && first_at_seam {
            // [0, 2): the whole circle
            Interval {
                lo: RationalPoint(Rational::zero()),
                hi: RationalPoint(Rational::zero()),
                lo_closed: true,
                hi_closed: true,
                wraps: true,
            }
        } else if first_at_seam {
            Interval {
                lo: RationalPoint(last.lo.clone()),
                hi: RationalPoint(first.hi.clone()),
                lo_closed: last.lo_closed,
                hi_closed: first.hi_closed,
                wraps: true,
            }
        } else {
            Interval {
                lo: RationalPoint(last.lo.clone()),
                hi: RationalPoint(Rational::zero()),
                lo_closed: last.lo_closed,
                hi_closed: false,
                wraps: true,
            }
        };
        let inner = if first_at_seam && segs.len() > 1 {
            &segs[1..segs.len() - 1]
        } else if first_at_seam {
            &segs[0..0]
        } else {
            &segs[..segs.len() - 1]
        };
        let mut intervals: Vec<Interval> = inner.iter().map(Interval::from_seg).collect();
        intervals.push(wrap);
        IntervalSet { intervals }
    }

    /// Builds a set from intervals already sorted, disjoint and unmergeable.
    pub(crate) fn from_sorted_disjoint(intervals: Vec<Interval>) -> Self {
        debug_assert_eq!(canonicalize(&intervals).intervals, intervals);
        IntervalSet { intervals }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut segs = self.segs();
        segs.extend(other.segs());
        IntervalSet::from_raw_segs(segs)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        if self.is_empty() || other.is_empty() {
            return IntervalSet::empty();
        }
        IntervalSet::fold(combine(&self.segs(), &other.segs(), |x, y| x && y))
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        if self.is_empty() || other.is_empty() {
            return self.clone();
        }
        IntervalSet::fold(combine(&self.segs(), &other.segs(), |x, y| x && !y))
    }

    pub fn complement(&self) -> IntervalSet {
        IntervalSet::full().difference(self)
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> IntervalSet {
        IntervalSet::from_raw_segs(sets.into_iter().flat_map(IntervalSet::segs).collect())
    }

    /// Intersection with a single interval.
    pub fn restrict_to(&self, window: &Interval) -> IntervalSet {
        match window.as_seg() {
            Some(w) => IntervalSet::fold(clip(&self.segs(), &w)),
            None => self.intersection(&window.clone().into()),
        }
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let x = RationalPoint::new(x.clone());
        locate_point(&self.segs(), x.value()).is_some()
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(Interval::length).sum()
    }

    /// Smallest closed set containing this one.
    pub fn closure(&self) -> IntervalSet {
        let segs = self
            .segs()
            .into_iter()
            .flat_map(|s| {
                let at_seam = s.hi == circumference();
                let mut out = vec![Seg::new(s.lo, s.hi.clone(), true, !at_seam)];
                if at_seam {
                    out.push(Seg::new(Rational::zero(), Rational::zero(), true, true));
                }
                out
            })
            .collect();
        IntervalSet::from_raw_segs(segs)
    }

    /// The preimage under the `n`-fold covering map. The cover circle is
    /// drawn on the same model circle: copy `j` of a point `x` sits at
    /// `(x + 2j) / n`.
    pub fn lift(&self, n: u32) -> IntervalSet {
        assert!(n >= 1, "covering degree must be positive");
        let scale = Rational::new(BigInt::one(), BigInt::from(n));
        let segs = self.segs();
        let mut out = Vec::with_capacity(segs.len() * n as usize);
        for j in 0..n {
            let shift = int(2 * i64::from(j)) * &scale;
            out.extend(segs.iter().map(|s| s.affine(&scale, &shift)));
        }
        IntervalSet::from_raw_segs(out)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.intervals.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

/// `I = [0, 1]`.
pub fn unit_arc() -> IntervalSet {
    Interval::closed(int(0), int(1)).expect("valid").into()
}

/// `U0 = (1, 2)`, the open complement of `I`.
pub fn u_zero() -> IntervalSet {
    Interval::new(int(1), int(0), false, false, true)
        .expect("valid")
        .into()
}

/// Finite stage of the middle-thirds construction on `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorStage {
    pub depth: u32,
    /// `2^depth` closed intervals of length `3^-depth`.
    pub remaining: IntervalSet,
    /// `removed_by_level[i]` is `U_{i+1}`: `2^i` open intervals of length `3^-(i+1)`.
    pub removed_by_level: Vec<IntervalSet>,
}

impl CantorStage {
    /// `U_level` for `level >= 1`, or `U0` for level 0.
    pub fn removed(&self, level: u32) -> Option<&IntervalSet> {
        if level == 0 {
            return None;
        }
        self.removed_by_level.get(level as usize - 1)
    }
}

pub fn cantor_stage(depth: u32) -> CantorStage {
    let mut remaining = vec![(int(0), int(1))];
    let mut removed_by_level = Vec::with_capacity(depth as usize);
    for _ in 0..depth {
        let mut next = Vec::with_capacity(remaining.len() * 2);
        let mut removed = Vec::with_capacity(remaining.len());
        for (a, b) in remaining {
            let third = (&b - &a) / int(3);
            let l = &a + &third;
            let r = &b - &third;
            removed.push(Interval::open(l.clone(), r.clone()).expect("middle third"));
            next.push((a, l));
            next.push((r, b));
        }
        removed_by_level.push(IntervalSet::from_sorted_disjoint(removed));
        remaining = next;
    }
    let remaining = IntervalSet::from_sorted_disjoint(
        remaining
            .into_iter()
            .map(|(a, b)| Interval::closed(a, b).expect("stage interval"))
            .collect(),
    );
    CantorStage {
        depth,
        remaining,
        removed_by_level,
    }
}

/// Depth-`d` truncations of `C1 = C ∩ [0, 1/3]` and `C2 = C ∩ [2/3, 1]`.
pub fn c1_c2(depth: u32) -> (IntervalSet, IntervalSet) {
    let stage = cantor_stage(depth);
    let low: IntervalSet = Interval::closed(int(0), rat(1, 3)).expect("valid").into();
    let high: IntervalSet = Interval::closed(rat(2, 3), int(1)).expect("valid").into();
    (
        stage.remaining.intersection(&low),
        stage.remaining.intersection(&high),
    )
}
