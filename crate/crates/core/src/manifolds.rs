//! Defining sequences of nested solid tori: geometric-index arithmetic, the
//! double 3-space classifier and the prime distinguisher, with replayable
//! certificates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gabai_tubes::{
    build_induction, effective_depth, resolve_plan, InductionStep, Provenance, SetupReport,
    TubeError,
};
use crate::interlacing::{biguint_decimal, mcmillan_bound, InterlaceBound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("levels must satisfy i < j, got i={i} j={j}")]
    Levels { i: u64, j: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("trace refused: link {level} has order {order}, need at least 2")]
    TraceRefused { level: u64, order: u32 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Tubes(#[from] TubeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "LinkRecord", into = "LinkRecord")]
pub enum LinkType {
    Whitehead,
    Bing,
    Gabai(u32),
    McMillan(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Whitehead,
    Bing,
    Gabai,
    McMillan,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    #[serde(rename = "type")]
    pub kind: LinkKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl TryFrom<LinkRecord> for LinkType {
    type Error = String;

    fn try_from(r: LinkRecord) -> Result<Self, String> {
        match (r.kind, r.order) {
            (_, Some(0)) => Err("link orders must be at least 1".into()),
            (LinkKind::Whitehead, None | Some(1)) => Ok(LinkType::Whitehead),
            (LinkKind::Bing, None | Some(1)) => Ok(LinkType::Bing),
            (LinkKind::Whitehead | LinkKind::Bing, Some(n)) => {
                Err(format!("{:?} links have no order {n}", r.kind).to_lowercase())
            }
            (LinkKind::Gabai, Some(n)) => Ok(LinkType::Gabai(n)),
            (LinkKind::McMillan, Some(n)) => Ok(LinkType::McMillan(n)),
            (kind, None) => Err(format!("{kind:?} link needs an order").to_lowercase()),
        }
    }
}

impl From<LinkType> for LinkRecord {
    fn from(l: LinkType) -> Self {
        let (kind, order) = match l {
            LinkType::Whitehead => (LinkKind::Whitehead, None),
            LinkType::Bing => (LinkKind::Bing, None),
            LinkType::Gabai(n) => (LinkKind::Gabai, Some(n)),
            LinkType::McMillan(n) => (LinkKind::McMillan, Some(n)),
        };
        LinkRecord { kind, order }
    }
}

impl LinkType {
    pub fn kind(self) -> LinkKind {
        LinkRecord::from(self).kind
    }

    /// The winding order; Whitehead and Bing links count as order 1.
    pub fn order(self) -> u32 {
        match self {
            LinkType::Whitehead | LinkType::Bing => 1,
            LinkType::Gabai(n) | LinkType::McMillan(n) => n,
        }
    }

    fn validate(self) -> Result<(), ManifoldError> {
        if self.order() == 0 {
            return Err(ManifoldError::InvalidSequence(format!(
                "{self} has order 0"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkType::Whitehead => write!(f, "whitehead"),
            LinkType::Bing => write!(f, "bing"),
            LinkType::Gabai(n) => write!(f, "gabai({n})"),
            LinkType::McMillan(n) => write!(f, "mcmillan({n})"),
        }
    }
}

/// Geometric index of the inner torus of the link in the outer one.
pub fn link_index(link: LinkType) -> u64 {
    match link {
        LinkType::Whitehead | LinkType::Bing => 2,
        LinkType::Gabai(n) | LinkType::McMillan(n) => 2 * u64::from(n),
    }
}

/// `T0 ⊂ T1 ⊂ ...` where link `i` (counted from 1) describes `T_{i-1} ⊂ T_i`.
/// The links are `prefix` followed by `period` repeated forever; an empty
/// period describes a finite truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningSequence {
    pub name: String,
    #[serde(default)]
    pub prefix: Vec<LinkType>,
    pub period: Vec<LinkType>,
}

impl DefiningSequence {
    pub fn periodic(name: impl Into<String>, period: Vec<LinkType>) -> Self {
        DefiningSequence {
            name: name.into(),
            prefix: Vec::new(),
            period,
        }
    }

    /// Link `i >= 1`, if the sequence reaches that far.
    pub fn link(&self, i: u64) -> Option<LinkType> {
        let i = usize::try_from(i.checked_sub(1)?).ok()?;
        if let Some(l) = self.prefix.get(i) {
            return Some(*l);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(self.period[(i - self.prefix.len()) % self.period.len()])
    }

    pub fn links(&self) -> impl Iterator<Item = LinkType> + '_ {
        self.prefix.iter().chain(&self.period).copied()
    }

    pub fn validate(&self) -> Result<(), ManifoldError> {
        self.links().try_for_each(LinkType::validate)
    }

    fn require_period(&self) -> Result<(), ManifoldError> {
        self.validate()?;
        if self.period.is_empty() {
            return Err(ManifoldError::InvalidSequence(format!(
                "{}: an infinite manifold needs a nonempty period",
                self.name
            )));
        }
        Ok(())
    }

    fn first_links(&self, horizon: u64) -> Vec<LinkType> {
        (1..=horizon).filter_map(|i| self.link(i)).collect()
    }
}

/// Geometric index of `T_i` in `T_j`: the product of the link indices in between.
pub fn index_between(seq: &DefiningSequence, i: u64, j: u64) -> Result<BigUint, ManifoldError> {
    if i >= j {
        return Err(ManifoldError::Levels { i, j });
    }
    seq.validate()?;
    let mut product = BigUint::one();
    for level in i + 1..=j {
        let link = seq.link(level).ok_or_else(|| {
            ManifoldError::InvalidSequence(format!("{} has no link {level}", seq.name))
        })?;
        product *= link_index(link);
    }
    Ok(product)
}

/// Upper and lower bounds on the index of an order-`n` Gabai link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexLedger {
    pub n: u32,
    /// Intersections of the inner core with a pair of meridional disks.
    pub disk_hits: u64,
    pub bing_count: u64,
    pub whitehead_count: u64,
    pub lower: u64,
    pub upper: u64,
}

/// The inner core meets a meridional disk in `2n` points, and the link splits
/// into `n - 1` Bing links and one Whitehead link, each forcing two more.
pub fn gabai_index_certificate(n: u32) -> Result<IndexLedger, ManifoldError> {
    if n == 0 {
        return Err(TubeError::InvalidOrder.into());
    }
    let bing_count = u64::from(n) - 1;
    let whitehead_count = 1;
    let disk_hits = link_index(LinkType::Gabai(n));
    let lower =
        bing_count * link_index(LinkType::Bing) + whitehead_count * link_index(LinkType::Whitehead);
    let ledger = IndexLedger {
        n,
        disk_hits,
        bing_count,
        whitehead_count,
        lower,
        upper: disk_hits,
    };
    if ledger.lower != ledger.upper {
        return Err(ManifoldError::VerificationFailed(format!(
            "gabai({n}): lower bound {lower} differs from upper bound {disk_hits}"
        )));
    }
    Ok(ledger)
}

/// True when every index is even.
pub fn parity_check_indices(indices: &[u64]) -> bool {
    indices.iter().all(|i| i % 2 == 0)
}

pub fn parity_check(seq: &DefiningSequence) -> bool {
    let indices: Vec<u64> = seq.links().map(link_index).collect();
    parity_check_indices(&indices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: u64,
    /// Order of the link crossed to reach this level; absent for the start.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub bound: InterlaceBound,
}

/// Iterates `k_j = 2 n_j k_{j-1} - 1` from `k0`. Every order must be at least 2.
pub fn divergence_trace(orders: &[u32], k0: u64) -> Result<Vec<InterlaceBound>, ManifoldError> {
    if let Some((i, &n)) = orders.iter().enumerate().find(|(_, &n)| n < 2) {
        return Err(ManifoldError::TraceRefused {
            level: i as u64 + 1,
            order: n,
        });
    }
    let mut k = BigUint::from(k0);
    let mut out = Vec::with_capacity(orders.len());
    for &n in orders {
        let next = mcmillan_bound(&k, n);
        if k0 >= 1 && next.value <= k {
            return Err(ManifoldError::VerificationFailed(format!(
                "bound did not increase past {k}"
            )));
        }
        k = next.value.clone();
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    #[serde(rename = "DOUBLE3SPACE_YES")]
    Double3SpaceYes,
    #[serde(rename = "DOUBLE3SPACE_NO")]
    Double3SpaceNo,
    Unknown,
    Distinct,
    IndistinguishableAtHorizon,
}

impl Verdict {
    pub fn is_decided(self) -> bool {
        !matches!(self, Verdict::Unknown | Verdict::IndistinguishableAtHorizon)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("verdict serializes");
        write!(f, "{}", s.as_str().expect("verdict is a string"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupEvidence {
    pub order: u32,
    pub provenance: Provenance,
    pub report: SetupReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWitness {
    /// `"a"` or `"b"`: the sequence whose period contains a multiple of `p`.
    pub side: String,
    /// Position in that period, counted from 0.
    pub period_position: usize,
    pub link: LinkType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Exhaustion {
        setup: Vec<SetupEvidence>,
        nestings: Vec<InductionStep>,
    },
    Divergence {
        trace: Vec<TraceStep>,
    },
    Prime {
        prime: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<PrimeWitness>,
        /// Levels up to the horizon whose link order `p` divides.
        a_levels: Vec<u64>,
        b_levels: Vec<u64>,
    },
    Scope {
        kinds: Vec<LinkKind>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Query {
    Classify {
        sequence: DefiningSequence,
        depth: u32,
        horizon: u64,
    },
    Distinguish {
        a: DefiningSequence,
        b: DefiningSequence,
        prime: u64,
        horizon: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub query: Query,
    pub evidence: Evidence,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Recomputes the certificate from its recorded query and checks that the
    /// result is byte-for-byte the same document.
    pub fn replay(&self, budget: u64) -> Result<bool, ManifoldError> {
        let again = match &self.query {
            Query::Classify {
                sequence,
                depth,
                horizon,
            } => classify_double3(sequence, *depth, *horizon, budget)?,
            Query::Distinguish {
                a,
                b,
                prime,
                horizon,
            } => distinguish_by_prime(a, b, *prime, *horizon)?,
        };
        Ok(again.to_json() == self.to_json())
    }
}

fn all_gabai(seq: &DefiningSequence) -> bool {
    seq.links().all(|l| matches!(l, LinkType::Gabai(_)))
}

fn all_mcmillan(seq: &DefiningSequence) -> bool {
    seq.links()
        .all(|l| matches!(l, LinkType::McMillan(n) if n >= 2))
}

/// Decides the double 3-space property where the construction applies:
/// sequences of Gabai links get an exhaustion chain, sequences of McMillan
/// links of order at least 2 get a divergence trace, anything else is
/// `UNKNOWN`.
pub fn classify_double3(
    seq: &DefiningSequence,
    depth: u32,
    horizon: u64,
    budget: u64,
) -> Result<Certificate, ManifoldError> {
    seq.require_period()?;
    if horizon == 0 {
        return Err(ManifoldError::InvalidSequence(
            "horizon must be at least 1".into(),
        ));
    }
    let query = Query::Classify {
        sequence: seq.clone(),
        depth,
        horizon,
    };
    let links = seq.first_links(horizon);

    if all_gabai(seq) {
        let orders: Vec<u32> = links.iter().map(|l| l.order()).collect();
        let induction = build_induction(&orders, depth, budget)?;
        let mut setup: BTreeMap<u32, SetupEvidence> = BTreeMap::new();
        for &n in &orders {
            if setup.contains_key(&n) {
                continue;
            }
            let resolved = resolve_plan(n, effective_depth(n, depth)?, None, budget)?;
            setup.insert(
                n,
                SetupEvidence {
                    order: n,
                    provenance: resolved.provenance,
                    report: resolved.report,
                },
            );
        }
        if !induction.pass() {
            let bad = induction
                .steps
                .iter()
                .find(|s| !s.pass())
                .map_or(0, |s| s.level);
            return Err(ManifoldError::VerificationFailed(format!(
                "exhaustion chain breaks at level {bad}"
            )));
        }
        return Ok(Certificate {
            verdict: Verdict::Double3SpaceYes,
            query,
            evidence: Evidence::Exhaustion {
                setup: setup.into_values().collect(),
                nestings: induction.steps,
            },
        });
    }

    if all_mcmillan(seq) {
        let orders: Vec<u32> = links.iter().map(|l| l.order()).collect();
        let bounds = divergence_trace(&orders, 1)?;
        let last = &bounds.last().expect("horizon >= 1").value;
        if *last <= BigUint::from(horizon) {
            return Err(ManifoldError::VerificationFailed(format!(
                "bound {last} does not exceed the horizon {horizon}"
            )));
        }
        let mut trace = vec![TraceStep {
            level: 0,
            order: None,
            bound: InterlaceBound::lower(1u32),
        }];
        trace.extend(
            bounds
                .into_iter()
                .zip(&orders)
                .enumerate()
                .map(|(j, (bound, &n))| TraceStep {
                    level: j as u64 + 1,
                    order: Some(n),
                    bound,
                }),
        );
        return Ok(Certificate {
            verdict: Verdict::Double3SpaceNo,
            query,
            evidence: Evidence::Divergence { trace },
        });
    }

    let mut kinds: Vec<LinkKind> = Vec::new();
    for l in seq.links() {
        if !kinds.contains(&l.kind()) {
            kinds.push(l.kind());
        }
    }
    Ok(Certificate {
        verdict: Verdict::Unknown,
        query,
        evidence: Evidence::Scope { kinds },
    })
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn divisible_levels(seq: &DefiningSequence, p: u64, horizon: u64) -> Vec<u64> {
    (1..=horizon)
        .filter(|&i| seq.link(i).is_some_and(|l| u64::from(l.order()) % p == 0))
        .collect()
}

fn period_witness(seq: &DefiningSequence, p: u64) -> Option<(usize, LinkType)> {
    seq.period
        .iter()
        .enumerate()
        .find(|(_, l)| u64::from(l.order()) % p == 0)
        .map(|(i, l)| (i, *l))
}

/// Two sequences are told apart when `p` divides infinitely many link orders
/// of one and only finitely many of the other.
pub fn distinguish_by_prime(
    a: &DefiningSequence,
    b: &DefiningSequence,
    p: u64,
    horizon: u64,
) -> Result<Certificate, ManifoldError> {
    a.require_period()?;
    b.require_period()?;
    if !is_prime(p) {
        return Err(ManifoldError::NotPrime(p));
    }
    let (wa, wb) = (period_witness(a, p), period_witness(b, p));
    let witness = match (wa, wb) {
        (Some((i, link)), None) => Some(PrimeWitness {
            side: "a".into(),
            period_position: i,
            link,
        }),
        (None, Some((i, link))) => Some(PrimeWitness {
            side: "b".into(),
            period_position: i,
            link,
        }),
        _ => None,
    };
    let verdict = if witness.is_some() {
        Verdict::Distinct
    } else {
        Verdict::IndistinguishableAtHorizon
    };
    Ok(Certificate {
        verdict,
        query: Query::Distinguish {
            a: a.clone(),
            b: b.clone(),
            prime: p,
            horizon,
        },
        evidence: Evidence::Prime {
            prime: p,
            witness,
            a_levels: divisible_levels(a, p, horizon),
            b_levels: divisible_levels(b, p, horizon),
        },
    })
}

/// Index of `T_i` in `T_j` together with the per-link factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub i: u64,
    pub j: u64,
    pub factors: Vec<u64>,
    #[serde(with = "biguint_decimal")]
    pub index: BigUint,
}

pub fn index_report(seq: &DefiningSequence, i: u64, j: u64) -> Result<IndexReport, ManifoldError> {
    let index = index_between(seq, i, j)?;
    let factors = (i + 1..=j)
        .map(|l| link_index(seq.link(l).expect("checked by index_between")))
        .collect();
    Ok(IndexReport {
        i,
        j,
        factors,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabai_tubes::DEFAULT_SEARCH_BUDGET;

    fn finite(links: Vec<LinkType>) -> DefiningSequence {
        DefiningSequence {
            name: "t".into(),
            prefix: links,
            period: vec![],
        }
    }

    #[test]
    fn link_indices() {
        assert_eq!(link_index(LinkType::Whitehead), 2);
        assert_eq!(link_index(LinkType::Gabai(3)), 6);
        assert_eq!(link_index(LinkType::McMillan(1)), 2);
    }

    #[test]
    fn index_between_examples() {
        let s = finite(vec![LinkType::Gabai(2), LinkType::Gabai(3)]);
        assert_eq!(index_between(&s, 0, 2).unwrap(), BigUint::from(24u32));
        assert_eq!(index_between(&s, 1, 2).unwrap(), BigUint::from(6u32));
        let w = finite(vec![LinkType::Whitehead; 5]);
        assert_eq!(index_between(&w, 0, 5).unwrap(), BigUint::from(32u32));
        assert_eq!(
            index_between(&w, 2, 2),
            Err(ManifoldError::Levels { i: 2, j: 2 })
        );
        assert!(matches!(
            index_between(&w, 0, 6),
            Err(ManifoldError::InvalidSequence(_))
        ));
        let p = DefiningSequence::periodic("p", vec![LinkType::McMillan(3)]);
        assert_eq!(index_between(&p, 10, 12).unwrap(), BigUint::from(36u32));
    }

    #[test]
    fn gabai_ledgers() {
        let l = gabai_index_certificate(3).unwrap();
        assert_eq!(
            l,
            IndexLedger {
                n: 3,
                disk_hits: 6,
                bing_count: 2,
                whitehead_count: 1,
                lower: 6,
                upper: 6
            }
        );
        let l = gabai_index_certificate(1).unwrap();
        assert_eq!(
            (l.bing_count, l.whitehead_count, l.lower, l.upper),
            (0, 1, 2, 2)
        );
        let l = gabai_index_certificate(10).unwrap();
        assert_eq!((l.lower, l.upper), (20, 20));
    }

    #[test]
    fn traces() {
        let t = |orders: &[u32]| -> Vec<u64> {
            divergence_trace(orders, 1)
                .unwrap()
                .iter()
                .map(|b| u64::try_from(&b.value).unwrap())
                .collect()
        };
        assert_eq!(t(&[2, 2, 2, 2]), vec![3, 11, 43, 171]);
        assert_eq!(t(&[2]), vec![3]);
        assert_eq!(t(&[3, 2]), vec![5, 19]);
        assert_eq!(
            divergence_trace(&[2, 1], 1),
            Err(ManifoldError::TraceRefused { level: 2, order: 1 })
        );
    }

    #[test]
    fn parity() {
        for n in 1..=20 {
            assert!(parity_check(&DefiningSequence::periodic(
                "g",
                vec![LinkType::Gabai(n)]
            )));
        }
        assert!(parity_check(&finite(vec![LinkType::McMillan(7)])));
        assert!(!parity_check_indices(&[2, 3, 4]));
    }

    #[test]
    fn classify_gabai() {
        let seq = DefiningSequence::periodic("g2", vec![LinkType::Gabai(2)]);
        let cert = classify_double3(&seq, 5, 4, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.verdict, Verdict::Double3SpaceYes);
        let Evidence::Exhaustion { setup, nestings } = &cert.evidence else {
            panic!("wrong evidence")
        };
        assert_eq!(nestings.len(), 4);
        assert!(nestings.iter().all(InductionStep::pass));
        assert_eq!(setup.len(), 1);
        assert!(setup[0].report.pass);
        assert!(cert.replay(DEFAULT_SEARCH_BUDGET).unwrap());
    }

    #[test]
    fn classify_mcmillan() {
        let seq = DefiningSequence::periodic("m2", vec![LinkType::McMillan(2)]);
        let cert = classify_double3(&seq, 5, 4, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.verdict, Verdict::Double3SpaceNo);
        let Evidence::Divergence { trace } = &cert.evidence else {
            panic!("wrong evidence")
        };
        let values: Vec<String> = trace.iter().map(|s| s.bound.value.to_string()).collect();
        assert_eq!(values, ["1", "3", "11", "43", "171"]);
        assert!(cert.replay(DEFAULT_SEARCH_BUDGET).unwrap());
    }

    #[test]
    fn classify_out_of_scope() {
        let mixed =
            DefiningSequence::periodic("mix", vec![LinkType::Gabai(2), LinkType::McMillan(2)]);
        let cert = classify_double3(&mixed, 5, 4, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.verdict, Verdict::Unknown);
        let order_one = DefiningSequence::periodic("m1", vec![LinkType::McMillan(1)]);
        assert_eq!(
            classify_double3(&order_one, 5, 4, DEFAULT_SEARCH_BUDGET)
                .unwrap()
                .verdict,
            Verdict::Unknown
        );
        assert!(matches!(
            classify_double3(
                &finite(vec![LinkType::Gabai(2)]),
                5,
                4,
                DEFAULT_SEARCH_BUDGET
            ),
            Err(ManifoldError::InvalidSequence(_))
        ));
    }

    #[test]
    fn prime_distinguisher() {
        let g2 = DefiningSequence::periodic("g2", vec![LinkType::Gabai(2)]);
        let g3 = DefiningSequence::periodic("g3", vec![LinkType::Gabai(3)]);
        let c = distinguish_by_prime(&g2, &g3, 3, 5).unwrap();
        assert_eq!(c.verdict, Verdict::Distinct);
        let Evidence::Prime {
            witness,
            a_levels,
            b_levels,
            ..
        } = &c.evidence
        else {
            panic!("wrong evidence")
        };
        assert_eq!(witness.as_ref().unwrap().side, "b");
        assert!(a_levels.is_empty());
        assert_eq!(b_levels, &[1, 2, 3, 4, 5]);

        let same = distinguish_by_prime(&g2, &g2, 3, 5).unwrap();
        assert_eq!(same.verdict, Verdict::IndistinguishableAtHorizon);

        let m6 = DefiningSequence::periodic("m6", vec![LinkType::McMillan(6)]);
        let m2 = DefiningSequence::periodic("m2", vec![LinkType::McMillan(2)]);
        assert_eq!(
            distinguish_by_prime(&m6, &m2, 3, 5).unwrap().verdict,
            Verdict::Distinct
        );
        // a multiple of 3 in the prefix alone is only finitely many
        let prefixed = DefiningSequence {
            name: "pre".into(),
            prefix: vec![LinkType::Gabai(3)],
            period: vec![LinkType::Gabai(2)],
        };
        assert_eq!(
            distinguish_by_prime(&prefixed, &g2, 3, 5).unwrap().verdict,
            Verdict::IndistinguishableAtHorizon
        );
        assert_eq!(
            distinguish_by_prime(&g2, &g3, 4, 5),
            Err(ManifoldError::NotPrime(4))
        );
    }

    #[test]
    fn link_serde() {
        let seq: DefiningSequence = serde_json::from_str(
            r#"{"name":"x","prefix":[{"type":"whitehead"}],"period":[{"type":"gabai","order":2},{"type":"bing","order":1}]}"#,
        )
        .unwrap();
        assert_eq!(seq.prefix, vec![LinkType::Whitehead]);
        assert_eq!(seq.period, vec![LinkType::Gabai(2), LinkType::Bing]);
        for bad in [
            r#"{"type":"gabai"}"#,
            r#"{"type":"gabai","order":0}"#,
            r#"{"type":"whitehead","order":3}"#,
            r#"{"type":"torus","order":1}"#,
        ] {
            assert!(serde_json::from_str::<LinkType>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn verdict_names() {
        assert_eq!(Verdict::Double3SpaceYes.to_string(), "DOUBLE3SPACE_YES");
        assert_eq!(
            Verdict::IndistinguishableAtHorizon.to_string(),
            "INDISTINGUISHABLE_AT_HORIZON"
        );
    }
}
