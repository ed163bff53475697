//! Interlacing numbers of disjoint sets on a circle and the lower bounds they
//! propagate through Whitehead and McMillan links.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::circle::{circumference, Interval, IntervalSet, Rational, RationalPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterlaceError {
    #[error("the two sets share the point {0}")]
    SharedPoint(String),
    #[error("the two sets overlap")]
    Overlap,
    #[error("the closures of the two sets touch, so no disjoint open neighbourhoods exist")]
    Touching,
    #[error("the sets are not interlaced, so there is no neighbourhood witness")]
    NoWitness,
    #[error("lifted interlacing {lifted} is not {n} times {base}")]
    CoverMismatch { base: u64, n: u32, lifted: u64 },
    #[error("the brute-force oracle is limited to {BRUTE_FORCE_LIMIT} points, got {0}")]
    TooManyPoints(usize),
    #[error("covering degree must be at least 1")]
    BadDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoundKind {
    Exact,
    Lower,
}

/// An interlacing number, either computed exactly or known only from below.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterlaceBound {
    #[serde(with = "biguint_decimal")]
    pub value: BigUint,
    pub kind: BoundKind,
}

impl InterlaceBound {
    pub fn exact(value: impl Into<BigUint>) -> Self {
        InterlaceBound {
            value: value.into(),
            kind: BoundKind::Exact,
        }
    }

    pub fn lower(value: impl Into<BigUint>) -> Self {
        InterlaceBound {
            value: value.into(),
            kind: BoundKind::Lower,
        }
    }
}

impl fmt::Display for InterlaceBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BoundKind::Exact => write!(f, "{}", self.value),
            BoundKind::Lower => write!(f, ">= {}", self.value),
        }
    }
}

/// Serializes a `BigUint` as a decimal string.
pub mod biguint_decimal {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(serde::de::Error::custom(format!(
                "expected a decimal integer, got {text:?}"
            )));
        }
        BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| serde::de::Error::custom("bad integer"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

/// Half the number of label changes around the cyclic sequence.
fn alternation(labels: &[Label]) -> u64 {
    if labels.is_empty() {
        return 0;
    }
    let changes = labels
        .iter()
        .zip(labels.iter().cycle().skip(1))
        .filter(|(x, y)| x != y)
        .count();
    changes as u64 / 2
}

fn merged_points(a: &[Rational], b: &[Rational]) -> Result<Vec<(Rational, Label)>, InterlaceError> {
    let mut pts: Vec<(Rational, Label)> = a
        .iter()
        .map(|x| (RationalPoint::new(x.clone()).into_value(), Label::A))
        .chain(
            b.iter()
                .map(|x| (RationalPoint::new(x.clone()).into_value(), Label::B)),
        )
        .collect();
    pts.sort();
    pts.dedup();
    if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(InterlaceError::SharedPoint(w[0].0.to_string()));
    }
    Ok(pts)
}

/// The largest `k` for which `k` points of `a` and `k` points of `b`
/// alternate around the circle. Points are taken modulo the circumference.
pub fn interlace_points(a: &[Rational], b: &[Rational]) -> Result<InterlaceBound, InterlaceError> {
    let pts = merged_points(a, b)?;
    let labels: Vec<Label> = pts.into_iter().map(|(_, l)| l).collect();
    Ok(InterlaceBound::exact(alternation(&labels)))
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Reference implementation: tries every subset of the merged points and
/// keeps the largest one that alternates perfectly.
pub fn interlace_points_brute_force(
    a: &[Rational],
    b: &[Rational],
) -> Result<InterlaceBound, InterlaceError> {
    let pts = merged_points(a, b)?;
    if pts.len() > BRUTE_FORCE_LIMIT {
        return Err(InterlaceError::TooManyPoints(pts.len()));
    }
    let mut best = 0u64;
    for mask in 1u32..(1 << pts.len()) {
        let chosen: Vec<Label> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.1)
            .collect();
        let n = chosen.len();
        if n.is_multiple_of(2) && (0..n).all(|i| chosen[i] != chosen[(i + 1) % n]) {
            best = best.max(n as u64 / 2);
        }
    }
    Ok(InterlaceBound::exact(best))
}

fn check_disjoint(a: &IntervalSet, b: &IntervalSet) -> Result<(), InterlaceError> {
    if a.is_disjoint(b) {
        Ok(())
    } else {
        Err(InterlaceError::Overlap)
    }
}

fn labelled_components<'a>(a: &'a IntervalSet, b: &'a IntervalSet) -> Vec<(&'a Interval, Label)> {
    let mut comps: Vec<(&Interval, Label)> = a
        .intervals()
        .iter()
        .map(|iv| (iv, Label::A))
        .chain(b.intervals().iter().map(|iv| (iv, Label::B)))
        .collect();
    comps.sort_by(|x, y| x.0.lo().cmp(y.0.lo()));
    comps
}

/// Interlacing number of two disjoint interval sets, computed from one
/// representative point per component.
pub fn interlace_intervals(
    a: &IntervalSet,
    b: &IntervalSet,
) -> Result<InterlaceBound, InterlaceError> {
    check_disjoint(a, b)?;
    let reps = |s: &IntervalSet| -> Vec<Rational> {
        s.intervals().iter().map(Interval::midpoint).collect()
    };
    interlace_points(&reps(a), &reps(b))
}

fn open_arc(from: &Rational, to: &Rational) -> Interval {
    Interval::new(from.clone(), to.clone(), false, false, to <= from)
        .expect("arc endpoints on the circle")
}

/// Disjoint open neighbourhoods `U ⊇ a` and `V ⊇ b` with exactly `k`
/// components each, where `k` is the interlacing number of `a` and `b`.
///
/// Consecutive components with the same label are grouped; each group is
/// widened to the midpoints of the gaps separating it from its neighbours.
pub fn neighborhood_witness(
    a: &IntervalSet,
    b: &IntervalSet,
) -> Result<(IntervalSet, IntervalSet), InterlaceError> {
    check_disjoint(a, b)?;
    if !a.closure().is_disjoint(&b.closure()) {
        return Err(InterlaceError::Touching);
    }
    if interlace_intervals(a, b)?.value.is_zero() {
        return Err(InterlaceError::NoWitness);
    }
    let comps = labelled_components(a, b);
    let two = circumference();
    // boundary after component i when the label changes there
    let mut cuts: Vec<(usize, Rational)> = Vec::new();
    for i in 0..comps.len() {
        let j = (i + 1) % comps.len();
        if comps[i].1 == comps[j].1 {
            continue;
        }
        let end = comps[i].0.hi();
        let start = comps[j].0.lo();
        let mut gap = start - end;
        if gap < Rational::zero() {
            gap += &two;
        }
        let mut mid = end + gap / Rational::from_integer(2.into());
        if mid >= two {
            mid -= &two;
        }
        cuts.push((i, mid));
    }
    let mut u = Vec::new();
    let mut v = Vec::new();
    for c in 0..cuts.len() {
        let (_, ref from) = cuts[c];
        let (last, ref to) = cuts[(c + 1) % cuts.len()];
        let arc = open_arc(from, to);
        match comps[last].1 {
            Label::A => u.push(arc),
            Label::B => v.push(arc),
        }
    }
    Ok((u.into(), v.into()))
}

/// Interlacing number of the lifts of `a` and `b` to the `n`-fold cover.
/// Fails if it is not `n` times the interlacing number downstairs.
pub fn cover_interlace(
    a: &IntervalSet,
    b: &IntervalSet,
    n: u32,
) -> Result<InterlaceBound, InterlaceError> {
    if n == 0 {
        return Err(InterlaceError::BadDegree);
    }
    let base = interlace_intervals(a, b)?;
    let lifted = interlace_intervals(&a.lift(n), &b.lift(n))?;
    if lifted.value != &base.value * n {
        return Err(InterlaceError::CoverMismatch {
            base: to_u64(&base.value),
            n,
            lifted: to_u64(&lifted.value),
        });
    }
    Ok(lifted)
}

fn to_u64(v: &BigUint) -> u64 {
    v.try_into().unwrap_or(u64::MAX)
}

/// Lower bound on the interlacing carried through a Whitehead link:
/// `max(0, 2k - 1)`.
pub fn whitehead_bound(k: &BigUint) -> InterlaceBound {
    mcmillan_bound(k, 1)
}

/// Lower bound on the interlacing carried through an order-`n` McMillan
/// link: `max(0, 2nk - 1)`.
pub fn mcmillan_bound(k: &BigUint, n: u32) -> InterlaceBound {
    let m = k * BigUint::from(2 * u64::from(n));
    if m.is_zero() {
        InterlaceBound::lower(0u32)
    } else {
        InterlaceBound::lower(m - BigUint::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{c1_c2, int, rat};

    fn eighths(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x, 8)).collect()
    }

    fn closed(a: Rational, b: Rational) -> Interval {
        Interval::closed(a, b).unwrap()
    }

    fn value(b: InterlaceBound) -> u64 {
        to_u64(&b.value)
    }

    #[test]
    fn point_examples() {
        let k = interlace_points(&eighths(&[1, 5]), &eighths(&[3, 7])).unwrap();
        assert_eq!(k, InterlaceBound::exact(2u32));
        let a = eighths(&[1, 2]);
        let b = eighths(&[5, 6]);
        assert_eq!(value(interlace_points(&a, &b).unwrap()), 1);
        assert_eq!(value(interlace_points_brute_force(&a, &b).unwrap()), 1);
        assert_eq!(value(interlace_points(&eighths(&[1]), &[]).unwrap()), 0);
    }

    #[test]
    fn shared_point_rejected() {
        let err = interlace_points(&eighths(&[1, 3]), &[rat(19, 8)]).unwrap_err();
        assert!(matches!(err, InterlaceError::SharedPoint(_)));
    }

    #[test]
    fn interval_examples() {
        let (c1, c2) = c1_c2(1);
        assert_eq!(value(interlace_intervals(&c1, &c2).unwrap()), 1);

        let a: IntervalSet = vec![
            closed(int(0), rat(1, 8)),
            closed(rat(2, 3), rat(3, 4)),
            closed(rat(4, 3), rat(3, 2)),
        ]
        .into();
        let b: IntervalSet = vec![
            closed(rat(1, 3), rat(1, 2)),
            closed(int(1), rat(9, 8)),
            closed(rat(5, 3), rat(7, 4)),
        ]
        .into();
        assert_eq!(value(interlace_intervals(&a, &b).unwrap()), 3);

        let a: IntervalSet = vec![closed(int(0), rat(1, 4)), closed(rat(1, 2), rat(3, 4))].into();
        let b: IntervalSet = closed(int(1), rat(3, 2)).into();
        assert_eq!(value(interlace_intervals(&a, &b).unwrap()), 1);

        let overlapping: IntervalSet = closed(rat(1, 8), rat(3, 4)).into();
        assert_eq!(
            interlace_intervals(&a, &overlapping),
            Err(InterlaceError::Overlap)
        );
    }

    #[test]
    fn wrapping_component_counts_once() {
        let a: IntervalSet = vec![
            Interval::new(rat(15, 8), rat(1, 8), true, true, true).unwrap(),
            closed(rat(1, 2), rat(5, 8)),
        ]
        .into();
        let b: IntervalSet = vec![closed(rat(1, 4), rat(3, 8)), closed(int(1), rat(5, 4))].into();
        assert_eq!(value(interlace_intervals(&a, &b).unwrap()), 2);
    }

    #[test]
    fn witness_for_alternating_points() {
        let pts = |xs: &[i64]| -> IntervalSet {
            xs.iter()
                .map(|&x| Interval::point(rat(x, 4)).unwrap())
                .collect::<Vec<_>>()
                .into()
        };
        let (a, b) = (pts(&[1, 5]), pts(&[3, 7]));
        let (u, v) = neighborhood_witness(&a, &b).unwrap();
        assert_eq!((u.component_count(), v.component_count()), (2, 2));
        assert!(a.is_subset(&u) && b.is_subset(&v) && u.is_disjoint(&v));
        assert!(u
            .intervals()
            .iter()
            .chain(v.intervals())
            .all(|c| !c.lo_closed() && !c.hi_closed()));
        // the cuts sit halfway between neighbouring points
        let expected: IntervalSet = vec![
            Interval::open(int(0), rat(1, 2)).unwrap(),
            Interval::open(int(1), rat(3, 2)).unwrap(),
        ]
        .into();
        assert_eq!(u, expected);
    }

    #[test]
    fn witness_for_two_arcs() {
        let (c1, c2) = c1_c2(2);
        let (u, v) = neighborhood_witness(&c1, &c2).unwrap();
        assert_eq!((u.component_count(), v.component_count()), (1, 1));
        assert!(c1.is_subset(&u) && c2.is_subset(&v) && u.is_disjoint(&v));
        let expected_u = Interval::new(rat(3, 2), rat(1, 2), false, false, true).unwrap();
        assert_eq!(u, expected_u.into());
        assert_eq!(v, Interval::open(rat(1, 2), rat(3, 2)).unwrap().into());
    }

    #[test]
    fn witness_preconditions() {
        let a: IntervalSet = closed(int(0), rat(1, 2)).into();
        assert_eq!(
            neighborhood_witness(&a, &IntervalSet::empty()),
            Err(InterlaceError::NoWitness)
        );
        let b: IntervalSet = Interval::new(rat(1, 2), int(1), false, true, false)
            .unwrap()
            .into();
        assert_eq!(neighborhood_witness(&a, &b), Err(InterlaceError::Touching));
    }

    #[test]
    fn cover_examples() {
        let (c1, c2) = c1_c2(1);
        assert_eq!(value(cover_interlace(&c1, &c2, 2).unwrap()), 2);

        let a: IntervalSet = vec![closed(int(0), rat(1, 8)), closed(int(1), rat(9, 8))].into();
        let b: IntervalSet =
            vec![closed(rat(1, 2), rat(5, 8)), closed(rat(3, 2), rat(13, 8))].into();
        assert_eq!(value(interlace_intervals(&a, &b).unwrap()), 2);
        assert_eq!(value(cover_interlace(&a, &b, 3).unwrap()), 6);
        let reps = |s: &IntervalSet| -> Vec<Rational> {
            s.lift(3)
                .intervals()
                .iter()
                .map(Interval::midpoint)
                .collect()
        };
        assert_eq!(
            value(interlace_points_brute_force(&reps(&a), &reps(&b)).unwrap()),
            6
        );

        assert_eq!(
            value(cover_interlace(&a, &IntervalSet::empty(), 4).unwrap()),
            0
        );
        assert_eq!(cover_interlace(&a, &b, 0), Err(InterlaceError::BadDegree));
    }

    #[test]
    fn bound_examples() {
        let b = |k: u32| BigUint::from(k);
        assert_eq!(whitehead_bound(&b(1)), InterlaceBound::lower(1u32));
        assert_eq!(whitehead_bound(&b(0)), InterlaceBound::lower(0u32));
        assert_eq!(whitehead_bound(&b(3)), InterlaceBound::lower(5u32));
        assert_eq!(mcmillan_bound(&b(1), 2), InterlaceBound::lower(3u32));
        assert_eq!(mcmillan_bound(&b(2), 3), InterlaceBound::lower(11u32));
        assert_eq!(mcmillan_bound(&b(0), 5), InterlaceBound::lower(0u32));
    }

    #[test]
    fn bound_serializes_as_decimal_string() {
        let json = serde_json::to_string(&InterlaceBound::lower(171u32)).unwrap();
        assert_eq!(json, r#"{"value":"171","kind":"LOWER"}"#);
        let back: InterlaceBound = serde_json::from_str(&json).unwrap();
        assert_eq!(back, InterlaceBound::lower(171u32));
        assert!(
            serde_json::from_str::<InterlaceBound>(r#"{"value":"-1","kind":"EXACT"}"#).is_err()
        );
    }
}
