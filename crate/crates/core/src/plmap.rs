//! Piecewise-affine partial self-maps of the model circle.
//!
//! A map is a list of pieces with pairwise disjoint domains. Each piece is an
//! affine map `x -> slope * x + offset` on a domain that does not cross the
//! seam, and its image stays inside `[0, 2)`. Pieces are individually
//! injective; the map as a whole need not be (several tubes of a Gabai
//! construction stretch onto the same target arc), so [`PLCircleMap::invert`]
//! checks global injectivity first.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{
    circumference, clip, format_rational, locate_point, merge_segs, parse_rational, CircleError,
    Interval, IntervalRecord, IntervalSet, Rational, RationalPoint, Seg,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("point {0} is outside the domain of the map")]
    OutsideDomain(Rational),
    #[error("cannot compose: {0}")]
    Composition(String),
    #[error("map is not injective on its domain")]
    NotInjective,
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
    #[error(transparent)]
    Circle(#[from] CircleError),
}

/// Sign of a piece's slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+1")]
    Preserving,
    #[serde(rename = "-1")]
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Preserving => Orientation::Reversing,
            Orientation::Reversing => Orientation::Preserving,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    domain: Seg,
    slope: Rational,
    offset: Rational,
}

impl Piece {
    pub fn new(domain: &Interval, slope: Rational, offset: Rational) -> Result<Self, MapError> {
        let domain = domain.as_seg().ok_or_else(|| {
            MapError::InvalidPiece(format!("domain {domain} crosses the seam; split it"))
        })?;
        Piece::from_seg(domain, slope, offset)
    }

    fn from_seg(domain: Seg, slope: Rational, offset: Rational) -> Result<Self, MapError> {
        if slope.is_zero() {
            return Err(MapError::InvalidPiece("slope must be nonzero".into()));
        }
        let piece = Piece {
            domain,
            slope,
            offset,
        };
        let img = piece.image_seg();
        let two = circumference();
        if img.lo.is_negative() || img.hi > two || (img.hi == two && img.hi_closed) {
            return Err(MapError::InvalidPiece(format!(
                "image [{}, {}] leaves [0, 2)",
                img.lo, img.hi
            )));
        }
        Ok(piece)
    }

    /// The affine map carrying `domain` onto `target` (both closed arcs not
    /// crossing the seam), with the given orientation.
    pub fn onto(
        domain: &Interval,
        target: &Interval,
        orientation: Orientation,
    ) -> Result<Self, MapError> {
        let t = target
            .as_seg()
            .ok_or_else(|| MapError::InvalidPiece(format!("target {target} crosses the seam")))?;
        let d = domain
            .as_seg()
            .ok_or_else(|| MapError::InvalidPiece(format!("domain {domain} crosses the seam")))?;
        if d.length().is_zero() || t.length().is_zero() {
            return Err(MapError::InvalidPiece("degenerate stretch".into()));
        }
        let scale = t.length() / d.length();
        let (slope, offset) = match orientation {
            Orientation::Preserving => (scale.clone(), &t.lo - &scale * &d.lo),
            Orientation::Reversing => (-scale.clone(), &t.hi + &scale * &d.lo),
        };
        Piece::from_seg(d, slope, offset)
    }

    pub fn domain(&self) -> Interval {
        Interval::from_seg_any(&self.domain)
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn orientation(&self) -> Orientation {
        if self.slope.is_positive() {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn image(&self) -> Interval {
        Interval::from_seg_any(&self.image_seg())
    }

    fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    fn image_seg(&self) -> Seg {
        self.domain.affine(&self.slope, &self.offset)
    }

    fn inverse(&self) -> Piece {
        let slope = Rational::one() / &self.slope;
        let offset = -(&self.offset * &slope);
        Piece {
            domain: self.image_seg(),
            slope,
            offset,
        }
    }
}

/// Wire form of a piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub domain: IntervalRecord,
    pub slope: String,
    pub offset: String,
}

/// Piecewise-affine partial map of the circle, in canonical form: pieces
/// sorted by domain, adjacent pieces with identical affine data merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PieceRecord>", into = "Vec<PieceRecord>")]
pub struct PLCircleMap {
    pieces: Vec<Piece>,
}

impl TryFrom<Vec<PieceRecord>> for PLCircleMap {
    type Error = MapError;

    fn try_from(records: Vec<PieceRecord>) -> Result<Self, MapError> {
        let pieces = records
            .into_iter()
            .map(|r| {
                let domain = Interval::try_from(r.domain)?;
                Piece::new(
                    &domain,
                    parse_rational(&r.slope)?,
                    parse_rational(&r.offset)?,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        PLCircleMap::new(pieces)
    }
}

impl From<PLCircleMap> for Vec<PieceRecord> {
    fn from(map: PLCircleMap) -> Self {
        map.pieces
            .iter()
            .map(|p| PieceRecord {
                domain: p.domain().into(),
                slope: format_rational(&p.slope),
                offset: format_rational(&p.offset),
            })
            .collect()
    }
}

fn segs_overlap(a: &Seg, b: &Seg) -> bool {
    // a.lo <= b.lo
    match b.lo.cmp(&a.hi) {
        Ordering::Less => true,
        Ordering::Equal => a.hi_closed && b.lo_closed,
        Ordering::Greater => false,
    }
}

fn sorted_overlap(mut segs: Vec<Seg>) -> bool {
    segs.sort_by(Seg::cmp_start);
    segs.windows(2).any(|w| segs_overlap(&w[0], &w[1]))
}

impl PLCircleMap {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, MapError> {
        let mut pieces = pieces;
        pieces.retain(|p| !p.domain.is_empty());
        if sorted_overlap(pieces.iter().map(|p| p.domain.clone()).collect()) {
            return Err(MapError::InvalidPiece("piece domains overlap".into()));
        }
        Ok(PLCircleMap::canonical(pieces))
    }

    fn canonical(mut pieces: Vec<Piece>) -> Self {
        pieces.sort_by(|a, b| a.domain.cmp_start(&b.domain));
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last_mut() {
                let joins =
                    p.domain.lo == last.domain.hi && (last.domain.hi_closed || p.domain.lo_closed);
                if joins && p.slope == last.slope && p.offset == last.offset {
                    last.domain.hi = p.domain.hi;
                    last.domain.hi_closed = p.domain.hi_closed;
                    continue;
                }
            }
            out.push(p);
        }
        PLCircleMap { pieces: out }
    }

    /// Identity on `domain`.
    pub fn identity(domain: &IntervalSet) -> Self {
        let pieces = domain
            .segs()
            .into_iter()
            .map(|s| Piece {
                domain: s,
                slope: Rational::one(),
                offset: Rational::zero(),
            })
            .collect();
        PLCircleMap::canonical(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> IntervalSet {
        IntervalSet::from_raw_segs(self.pieces.iter().map(|p| p.domain.clone()).collect())
    }

    pub fn range(&self) -> IntervalSet {
        IntervalSet::from_raw_segs(self.pieces.iter().map(Piece::image_seg).collect())
    }

    fn piece_at(&self, x: &Rational) -> Option<&Piece> {
        let idx = self.pieces.partition_point(|p| p.domain.hi < *x);
        self.pieces[idx..]
            .iter()
            .take(2)
            .find(|p| p.domain.contains(x))
    }

    pub fn apply(&self, x: &Rational) -> Result<Rational, MapError> {
        let x = RationalPoint::new(x.clone()).into_value();
        self.piece_at(&x)
            .map(|p| p.eval(&x))
            .ok_or(MapError::OutsideDomain(x))
    }

    pub fn image(&self, set: &IntervalSet) -> IntervalSet {
        let segs = merge_segs(set.segs());
        let out = self
            .pieces
            .iter()
            .flat_map(|p| {
                clip(&segs, &p.domain)
                    .into_iter()
                    .map(|s| s.affine(&p.slope, &p.offset))
            })
            .collect();
        IntervalSet::from_raw_segs(out)
    }

    pub fn preimage(&self, set: &IntervalSet) -> IntervalSet {
        let segs = merge_segs(set.segs());
        let out = self
            .pieces
            .iter()
            .flat_map(|p| {
                let inv = p.inverse();
                clip(&segs, &inv.domain)
                    .into_iter()
                    .map(move |s| s.affine(&inv.slope, &inv.offset))
            })
            .collect();
        IntervalSet::from_raw_segs(out)
    }

    pub fn is_injective(&self) -> bool {
        !sorted_overlap(self.pieces.iter().map(Piece::image_seg).collect())
    }

    /// `outer ∘ inner`: first `inner`, then `outer`.
    pub fn compose(outer: &PLCircleMap, inner: &PLCircleMap) -> Result<PLCircleMap, MapError> {
        let range = inner.range();
        let missing = range.difference(&outer.domain());
        if !missing.is_empty() {
            return Err(MapError::Composition(format!(
                "inner map reaches {missing}, outside the outer domain"
            )));
        }
        let mut pieces = Vec::new();
        for p in &inner.pieces {
            let img = p.image_seg();
            let inv = p.inverse();
            let start = outer.pieces.partition_point(|q| q.domain.hi < img.lo);
            for q in &outer.pieces[start..] {
                if q.domain.lo > img.hi {
                    break;
                }
                for hit in clip(std::slice::from_ref(&q.domain), &img) {
                    pieces.push(Piece {
                        domain: hit.affine(&inv.slope, &inv.offset),
                        slope: &q.slope * &p.slope,
                        offset: &q.slope * &p.offset + &q.offset,
                    });
                }
            }
        }
        Ok(PLCircleMap::canonical(pieces))
    }

    pub fn invert(&self) -> Result<PLCircleMap, MapError> {
        if !self.is_injective() {
            return Err(MapError::NotInjective);
        }
        Ok(PLCircleMap::canonical(
            self.pieces.iter().map(Piece::inverse).collect(),
        ))
    }

    /// Whether `x` lies in the domain.
    pub fn is_defined_at(&self, x: &Rational) -> bool {
        let x = RationalPoint::new(x.clone()).into_value();
        let segs: Vec<Seg> = self.pieces.iter().map(|p| p.domain.clone()).collect();
        locate_point(&segs, &x).is_some()
    }
}
