//! Circle-level model of the order-`n` Gabai tube construction.
//!
//! For order `n` pick `m, k` with `2^m + 2k = 4n < 2^(m+1)`. Removing
//! `U1..Um` from `I` leaves `2^m` intervals of length `3^-m`; removing the
//! middle third of the first `k` and the last `k` of them (the set `Ũ_{m+1}`)
//! leaves `4n` tubes. The circle shadow of `g_n` stretches every tube
//! affinely onto `LOW = [0, 1/3]` or `HIGH = [2/3, 1]`, sends `U0 ∪ U1` into
//! `U0`, and sends every other gap into `U0` or `U1`.
//!
//! The three set conditions on `g_n` are checked on depth-`d` truncations of
//! the Cantor set. Only the `S^1` factor is modelled: the disk factor of the
//! tubes (which keeps them disjoint in the solid torus) is assumed.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{
    cantor_stage, int, rat, rational_serde, u_zero, unit_arc, Interval, IntervalSet, Rational,
};
use crate::plmap::{MapError, Orientation, PLCircleMap, Piece};

/// Node budget of the assignment search when the caller gives none.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000;

/// Largest composite shadow `build_induction` will materialize.
pub const MAX_MAP_PIECES: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TubeError {
    #[error("Gabai order must be at least 1")]
    InvalidOrder,
    #[error("invalid tube: {0}")]
    InvalidTube(String),
    #[error("verification depth {depth} is below the minimum {min}")]
    Depth { depth: u32, min: u32 },
    #[error("inconsistent tube plan: {0}")]
    Plan(String),
    #[error("assignment search gave up after {0} nodes")]
    SearchExhausted(u64),
    #[error("no tube assignment for order {0} passes verification")]
    NoPassingAssignment(u32),
    #[error("composite shadow exceeds {MAX_MAP_PIECES} pieces at level {0}")]
    TooLarge(u32),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TubeParams {
    pub n: u32,
    pub m: u32,
    pub k: u32,
}

impl TubeParams {
    pub fn tube_count(&self) -> u64 {
        4 * u64::from(self.n)
    }

    /// Tubes of length `3^-(m+1)`.
    pub fn short_count(&self) -> u64 {
        4 * u64::from(self.k)
    }

    /// Tubes of length `3^-m`.
    pub fn long_count(&self) -> u64 {
        (1u64 << self.m) - 2 * u64::from(self.k)
    }
}

/// The unique `(m, k)` with `2^m + 2k = 4n < 2^(m+1)`.
pub fn tube_parameters(n: u32) -> Result<TubeParams, TubeError> {
    if n == 0 {
        return Err(TubeError::InvalidOrder);
    }
    let four_n = 4 * u64::from(n);
    let m = 63 - four_n.leading_zeros();
    let k = (four_n - (1u64 << m)) / 2;
    Ok(TubeParams { n, m, k: k as u32 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Target {
    /// `[0, 1/3]`
    Low,
    /// `[2/3, 1]`
    High,
}

impl Target {
    pub fn interval(self) -> Interval {
        match self {
            Target::Low => Interval::closed(int(0), rat(1, 3)),
            Target::High => Interval::closed(rat(2, 3), int(1)),
        }
        .expect("valid target")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TubeChoice {
    pub target: Target,
    pub orientation: Orientation,
}

impl TubeChoice {
    pub const ALL: [TubeChoice; 4] = [
        TubeChoice::new(Target::Low, Orientation::Preserving),
        TubeChoice::new(Target::Low, Orientation::Reversing),
        TubeChoice::new(Target::High, Orientation::Preserving),
        TubeChoice::new(Target::High, Orientation::Reversing),
    ];

    pub const fn new(target: Target, orientation: Orientation) -> Self {
        TubeChoice {
            target,
            orientation,
        }
    }

    /// Which removed region the left end of the tube is carried next to.
    fn left_side(self) -> Side {
        match (self.target, self.orientation) {
            (Target::Low, Orientation::Preserving) | (Target::High, Orientation::Reversing) => {
                Side::Outer
            }
            _ => Side::Middle,
        }
    }

    fn right_side(self) -> Side {
        match self.left_side() {
            Side::Outer => Side::Middle,
            Side::Middle => Side::Outer,
        }
    }
}

/// The endpoints of `LOW` and `HIGH` split into those bounding `U0`
/// (`0` and `1`) and those bounding `U1` (`1/3` and `2/3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Outer,
    Middle,
}

/// Default witness: every tube stays on its own side of `U1` (tubes in
/// `[0, 1/3]` go to `LOW`, the rest to `HIGH`) and the orientations zigzag so
/// that each tube runs from `V0` to `V1` and the next one back.
pub fn default_assignment(params: TubeParams) -> Vec<TubeChoice> {
    let half = 2 * params.n as usize;
    (0..2 * half)
        .map(|t| {
            let (target, j) = if t < half {
                (Target::Low, t)
            } else {
                (Target::High, t - half + 1)
            };
            let orientation = if j % 2 == 0 {
                Orientation::Preserving
            } else {
                Orientation::Reversing
            };
            TubeChoice::new(target, orientation)
        })
        .collect()
}

/// Targets alternating `LOW, HIGH, LOW, ...` along `I`, each orientation
/// chosen to continue from the previous tube's end.
pub fn alternating_assignment(params: TubeParams) -> Vec<TubeChoice> {
    let mut side = Side::Outer;
    (0..params.tube_count())
        .map(|t| {
            let target = if t % 2 == 0 {
                Target::Low
            } else {
                Target::High
            };
            let choice = [Orientation::Preserving, Orientation::Reversing]
                .into_iter()
                .map(|o| TubeChoice::new(target, o))
                .find(|c| c.left_side() == side)
                .expect("one orientation fits");
            side = choice.right_side();
            choice
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tube {
    pub interval: Interval,
    /// Cantor stage of the interval: `m` or `m + 1`.
    pub stage: u32,
    pub target: Target,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubePlan {
    pub params: TubeParams,
    pub u_tilde: IntervalSet,
    pub tubes: Vec<Tube>,
    pub shadow: PLCircleMap,
}

impl TubePlan {
    pub fn assignment(&self) -> Vec<TubeChoice> {
        self.tubes
            .iter()
            .map(|t| TubeChoice::new(t.target, t.orientation))
            .collect()
    }

    pub fn tube_set(&self) -> IntervalSet {
        IntervalSet::union_all(
            self.tubes
                .iter()
                .map(|t| IntervalSet::from(t.interval.clone()))
                .collect::<Vec<_>>()
                .iter(),
        )
    }
}

struct Layout {
    tubes: Vec<(Interval, u32)>,
    u_tilde: IntervalSet,
    /// Open gaps between consecutive tubes; `gaps[t]` follows tube `t`.
    gaps: Vec<Interval>,
    /// Index into `gaps` of `U1`.
    middle_gap: usize,
}

fn layout(params: TubeParams) -> Layout {
    let TubeParams { m, k, .. } = params;
    let stage = cantor_stage(m);
    let comps = stage.remaining.intervals();
    let count = comps.len();
    let k = k as usize;
    let mut tubes = Vec::with_capacity(params.tube_count() as usize);
    let mut removed = Vec::with_capacity(2 * k);
    for (i, iv) in comps.iter().enumerate() {
        if i < k || i >= count - k {
            let third = iv.length() / int(3);
            let l = iv.lo() + &third;
            let r = iv.hi() - &third;
            tubes.push((
                Interval::closed(iv.lo().clone(), l.clone()).expect("left third"),
                m + 1,
            ));
            removed.push(Interval::open(l, r.clone()).expect("middle third"));
            tubes.push((
                Interval::closed(r, iv.hi().clone()).expect("right third"),
                m + 1,
            ));
        } else {
            tubes.push((iv.clone(), m));
        }
    }
    let gaps: Vec<Interval> = tubes
        .windows(2)
        .map(|w| Interval::open(w[0].0.hi().clone(), w[1].0.lo().clone()).expect("gap"))
        .collect();
    let middle = Interval::open(rat(1, 3), rat(2, 3)).expect("U1");
    let middle_gap = gaps.iter().position(|g| *g == middle).expect("U1 is a gap");
    Layout {
        tubes,
        u_tilde: IntervalSet::from_sorted_disjoint(removed),
        gaps,
        middle_gap,
    }
}

/// Which side every gap is sent to, or the first tube whose ends do not match.
fn gap_sides(layout: &Layout, assignment: &[TubeChoice]) -> Result<Vec<Side>, TubeError> {
    let first = assignment.first().expect("at least four tubes");
    let last = assignment.last().expect("at least four tubes");
    if first.left_side() != Side::Outer || last.right_side() != Side::Outer {
        return Err(TubeError::Plan(
            "U0 must be flanked by ends carried next to U0".into(),
        ));
    }
    let mut sides = Vec::with_capacity(layout.gaps.len());
    for (t, pair) in assignment.windows(2).enumerate() {
        let (before, after) = (pair[0].right_side(), pair[1].left_side());
        if before != after {
            return Err(TubeError::Plan(format!(
                "tubes {t} and {} end next to different removed regions",
                t + 1
            )));
        }
        if t == layout.middle_gap && before != Side::Outer {
            return Err(TubeError::Plan(
                "U1 must be flanked by ends next to U0".into(),
            ));
        }
        sides.push(before);
    }
    Ok(sides)
}

/// Assembles the tube plan for order `n`; `None` uses [`default_assignment`].
pub fn build_tube_plan(n: u32, assignment: Option<&[TubeChoice]>) -> Result<TubePlan, TubeError> {
    let params = tube_parameters(n)?;
    let layout = layout(params);
    let default;
    let assignment = match assignment {
        Some(a) => a,
        None => {
            default = default_assignment(params);
            &default
        }
    };
    if assignment.len() != layout.tubes.len() {
        return Err(TubeError::Plan(format!(
            "assignment has {} entries, expected {}",
            assignment.len(),
            layout.tubes.len()
        )));
    }
    let sides = gap_sides(&layout, assignment)?;

    let outer_slot = Interval::open(rat(4, 3), rat(5, 3)).expect("slot");
    let middle_slot = Interval::open(rat(4, 9), rat(5, 9)).expect("slot");
    let mut pieces = Vec::with_capacity(2 * layout.tubes.len() + 1);
    let mut tubes = Vec::with_capacity(layout.tubes.len());
    for ((iv, stage), choice) in layout.tubes.iter().zip(assignment) {
        pieces.push(Piece::onto(
            iv,
            &choice.target.interval(),
            choice.orientation,
        )?);
        tubes.push(Tube {
            interval: iv.clone(),
            stage: *stage,
            target: choice.target,
            orientation: choice.orientation,
        });
    }
    for (g, (gap, side)) in layout.gaps.iter().zip(&sides).enumerate() {
        let piece = if g == layout.middle_gap {
            // U1 -> (25/24, 13/12) inside U0
            Piece::new(gap, rat(1, 8), int(1))?
        } else {
            let slot = match side {
                Side::Outer => &outer_slot,
                Side::Middle => &middle_slot,
            };
            Piece::onto(gap, slot, Orientation::Preserving)?
        };
        pieces.push(piece);
    }
    // U0 -> (5/4, 7/4)
    let u0 = Interval::new(int(1), int(0), false, false, true).expect("U0");
    pieces.push(Piece::new(&u0, rat(1, 2), rat(3, 4))?);

    Ok(TubePlan {
        params,
        u_tilde: layout.u_tilde,
        tubes,
        shadow: PLCircleMap::new(pieces)?,
    })
}

/// Cantor data up to a fixed depth, shared by the checks.
pub(crate) struct CantorTable {
    depth: u32,
    /// `remaining[j]` is stage `j`.
    remaining: Vec<IntervalSet>,
    /// `levels[0] = U0`, `levels[j] = U_j`.
    levels: Vec<IntervalSet>,
}

impl CantorTable {
    pub(crate) fn new(depth: u32) -> Self {
        let top = cantor_stage(depth);
        let mut levels = Vec::with_capacity(depth as usize + 1);
        levels.push(u_zero());
        levels.extend(top.removed_by_level.iter().cloned());
        let mut remaining = Vec::with_capacity(depth as usize + 1);
        let mut cur = unit_arc();
        remaining.push(cur.clone());
        for u in &top.removed_by_level {
            cur = cur.difference(u);
            remaining.push(cur.clone());
        }
        CantorTable {
            depth,
            remaining,
            levels,
        }
    }

    pub(crate) fn level(&self, j: u32) -> &IntervalSet {
        &self.levels[j as usize]
    }

    pub(crate) fn remaining(&self, j: u32) -> &IntervalSet {
        &self.remaining[j as usize]
    }

    fn c1(&self, j: u32) -> IntervalSet {
        self.remaining(j).restrict_to(&Target::Low.interval())
    }

    fn c2(&self, j: u32) -> IntervalSet {
        self.remaining(j).restrict_to(&Target::High.interval())
    }

    /// The level `j <= max` whose removed set contains `x`.
    fn level_of(&self, x: &Rational, max: u32) -> Option<u32> {
        (0..=max.min(self.depth)).find(|&j| self.levels[j as usize].contains_point(x))
    }
}

/// If `iv` is a component of some stage of the Cantor construction, that stage.
pub fn cantor_stage_of(iv: &Interval) -> Option<u32> {
    if !iv.is_closed() || iv.wraps() {
        return None;
    }
    let len = iv.length();
    let mut scale = BigInt::one();
    let mut s = 0u32;
    loop {
        let x = &len * Rational::from_integer(scale.clone());
        if x.is_one() {
            break;
        }
        if x > Rational::one() || s > 256 {
            return None;
        }
        s += 1;
        scale *= 3;
    }
    let a = iv.lo() * Rational::from_integer(scale.clone());
    if !a.is_integer() || a.to_integer() >= scale {
        return None;
    }
    let mut a = a.to_integer();
    let three = BigInt::from(3);
    while !a.is_zero() {
        let (q, r) = a.div_rem(&three);
        if r == BigInt::one() {
            return None;
        }
        a = q;
    }
    Some(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexShift {
    pub ell: u32,
    pub pass: bool,
}

fn shift_holds(
    table: &CantorTable,
    tube: &Interval,
    tube_stage: u32,
    target: &Interval,
    ell: u32,
    orientation: Orientation,
) -> Result<bool, TubeError> {
    let map = PLCircleMap::new(vec![Piece::onto(tube, target, orientation)?])?;
    let d = table.depth;
    for i in tube_stage + 1..=d {
        let lhs = map.image(&table.level(i).restrict_to(tube));
        if lhs != table.level(i - ell).restrict_to(target) {
            return Ok(false);
        }
    }
    let lhs = map.image(&table.remaining(d).restrict_to(tube));
    Ok(lhs == table.remaining(d - ell).restrict_to(target))
}

/// Checks that the affine stretch of `tube` onto `target` carries
/// `C ∩ tube` onto `C ∩ target` and `U_i ∩ tube` onto `U_{i-ℓ} ∩ target`
/// for every level up to `depth`, where `ℓ` is the difference of stages.
pub fn verify_index_shift_oriented(
    tube: &Interval,
    target: &Interval,
    orientation: Orientation,
    depth: u32,
) -> Result<IndexShift, TubeError> {
    let s = cantor_stage_of(tube)
        .ok_or_else(|| TubeError::InvalidTube(format!("{tube} is not a Cantor stage interval")))?;
    let t = cantor_stage_of(target).ok_or_else(|| {
        TubeError::InvalidTube(format!("{target} is not a Cantor stage interval"))
    })?;
    if t > s {
        return Err(TubeError::InvalidTube(format!(
            "{tube} is shorter than its target {target}"
        )));
    }
    if depth < s {
        return Err(TubeError::Depth { depth, min: s });
    }
    let table = CantorTable::new(depth);
    let ell = s - t;
    Ok(IndexShift {
        ell,
        pass: shift_holds(&table, tube, s, target, ell, orientation)?,
    })
}

/// [`verify_index_shift_oriented`] for an orientation-preserving stretch onto
/// `LOW` or `HIGH`.
pub fn verify_index_shift(
    tube: &Interval,
    target: Target,
    depth: u32,
) -> Result<IndexShift, TubeError> {
    verify_index_shift_oriented(tube, &target.interval(), Orientation::Preserving, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub level: u32,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub tube: usize,
    pub stage: u32,
    pub ell: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupReport {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub depth: u32,
    /// Tubes over `C1` land in `C1`, tubes over `C2` land in `C2`.
    pub cond_ab: bool,
    /// `U0 ∪ U1` is carried into `U0`.
    pub cond_v0: bool,
    /// Every component of `U_i` is carried into a single `U_j`, `j < i`.
    pub cond_drop: Vec<LevelCheck>,
    pub shift_checks: Vec<ShiftCheck>,
    /// The tube assignment that was verified.
    pub witness: Vec<TubeChoice>,
    pub pass: bool,
}

impl SetupReport {
    /// Recomputes the overall verdict from the sub-conditions.
    pub fn all_pass(&self) -> bool {
        self.cond_ab
            && self.cond_v0
            && self.cond_drop.iter().all(|c| c.pass)
            && self.shift_checks.iter().all(|c| c.pass)
    }
}

fn min_depth(params: TubeParams) -> u32 {
    params.m + 2
}

fn tube_side_ok(
    table: &CantorTable,
    tube: &Interval,
    choice: TubeChoice,
    m: u32,
) -> Result<bool, TubeError> {
    let map = PLCircleMap::new(vec![Piece::onto(
        tube,
        &choice.target.interval(),
        choice.orientation,
    )?])?;
    let d = table.depth;
    let a = map.image(&table.c1(d).restrict_to(tube));
    let b = map.image(&table.c2(d).restrict_to(tube));
    Ok(a.is_subset(&table.c1(d - m)) && b.is_subset(&table.c2(d - m)))
}

fn verify_with(plan: &TubePlan, table: &CantorTable) -> Result<SetupReport, TubeError> {
    let TubeParams { n, m, k } = plan.params;
    let d = table.depth;
    let shadow = &plan.shadow;

    let cond_ab = shadow.image(&table.c1(d)).is_subset(&table.c1(d - m))
        && shadow.image(&table.c2(d)).is_subset(&table.c2(d - m));
    let cond_v0 = shadow
        .image(&table.level(0).union(table.level(1)))
        .is_subset(table.level(0));

    let mut cond_drop = Vec::with_capacity(d as usize);
    for i in 2..=d {
        let mut pass = true;
        'components: for x in table.level(i).intervals() {
            let image = shadow.image(&x.clone().into());
            for y in image.intervals() {
                let ok = table
                    .level_of(&y.midpoint(), i - 1)
                    .is_some_and(|j| IntervalSet::from(y.clone()).is_subset(table.level(j)));
                if !ok {
                    pass = false;
                    break 'components;
                }
            }
        }
        cond_drop.push(LevelCheck { level: i, pass });
    }

    let mut shift_checks = Vec::with_capacity(plan.tubes.len());
    for (idx, tube) in plan.tubes.iter().enumerate() {
        let ell = tube.stage - 1;
        let pass = (ell == m - 1 || ell == m)
            && shift_holds(
                table,
                &tube.interval,
                tube.stage,
                &tube.target.interval(),
                ell,
                tube.orientation,
            )?;
        shift_checks.push(ShiftCheck {
            tube: idx,
            stage: tube.stage,
            ell,
            pass,
        });
    }

    let mut report = SetupReport {
        n,
        m,
        k,
        depth: d,
        cond_ab,
        cond_v0,
        cond_drop,
        shift_checks,
        witness: plan.assignment(),
        pass: false,
    };
    report.pass = report.all_pass();
    Ok(report)
}

/// Checks the three set conditions on the circle shadow at depth `depth`.
pub fn verify_setup(plan: &TubePlan, depth: u32) -> Result<SetupReport, TubeError> {
    let min = min_depth(plan.params);
    if depth < min {
        return Err(TubeError::Depth { depth, min });
    }
    verify_with(plan, &CantorTable::new(depth))
}

/// Backtracking search for a passing assignment. Each tube tries the four
/// (target, orientation) choices; a branch is cut when the tube's ends do not
/// continue its neighbour's or the tube alone already breaks a condition.
pub fn search_assignment(
    n: u32,
    depth: u32,
    budget: u64,
) -> Result<(Vec<TubeChoice>, u64), TubeError> {
    let params = tube_parameters(n)?;
    let min = min_depth(params);
    if depth < min {
        return Err(TubeError::Depth { depth, min });
    }
    let layout = layout(params);
    let table = CantorTable::new(depth);
    let mut local = Vec::with_capacity(layout.tubes.len());
    for (iv, stage) in &layout.tubes {
        let mut ok = [false; 4];
        for (slot, choice) in ok.iter_mut().zip(TubeChoice::ALL) {
            *slot = shift_holds(
                &table,
                iv,
                *stage,
                &choice.target.interval(),
                stage - 1,
                choice.orientation,
            )? && tube_side_ok(&table, iv, choice, params.m)?;
        }
        local.push(ok);
    }

    struct Search<'a> {
        layout: &'a Layout,
        local: &'a [[bool; 4]],
        table: &'a CantorTable,
        n: u32,
        budget: u64,
        nodes: u64,
        path: Vec<TubeChoice>,
    }

    impl Search<'_> {
        fn run(&mut self) -> Result<bool, TubeError> {
            let t = self.path.len();
            if t == self.layout.tubes.len() {
                if self.path.last().map(|c| c.right_side()) != Some(Side::Outer) {
                    return Ok(false);
                }
                let plan = build_tube_plan(self.n, Some(&self.path))?;
                return Ok(verify_with(&plan, self.table)?.pass);
            }
            let needed = match t {
                0 => Side::Outer,
                _ if t - 1 == self.layout.middle_gap => Side::Outer,
                _ => self.path[t - 1].right_side(),
            };
            if t > 0
                && t - 1 == self.layout.middle_gap
                && self.path[t - 1].right_side() != Side::Outer
            {
                return Ok(false);
            }
            for (i, choice) in TubeChoice::ALL.into_iter().enumerate() {
                if !self.local[t][i] || choice.left_side() != needed {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(TubeError::SearchExhausted(self.budget));
                }
                self.path.push(choice);
                if self.run()? {
                    return Ok(true);
                }
                self.path.pop();
            }
            Ok(false)
        }
    }

    let mut search = Search {
        layout: &layout,
        local: &local,
        table: &table,
        n,
        budget,
        nodes: 0,
        path: Vec::with_capacity(layout.tubes.len()),
    };
    if search.run()? {
        Ok((search.path, search.nodes))
    } else {
        Err(TubeError::NoPassingAssignment(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    /// The requested (or default) assignment passed as given.
    AsGiven,
    /// The requested assignment failed and the search found this one.
    Searched { nodes: u64 },
}

#[derive(Clone, Debug)]
pub struct ResolvedPlan {
    pub plan: TubePlan,
    pub report: SetupReport,
    pub provenance: Provenance,
}

/// Tries `preferred` (or the default assignment) first and falls back to
/// [`search_assignment`] when it is inconsistent or fails verification.
pub fn resolve_plan(
    n: u32,
    depth: u32,
    preferred: Option<&[TubeChoice]>,
    budget: u64,
) -> Result<ResolvedPlan, TubeError> {
    match build_tube_plan(n, preferred) {
        Ok(plan) => {
            let report = verify_setup(&plan, depth)?;
            if report.pass {
                return Ok(ResolvedPlan {
                    plan,
                    report,
                    provenance: Provenance::AsGiven,
                });
            }
        }
        Err(TubeError::Plan(_)) => {}
        Err(e) => return Err(e),
    }
    let (assignment, nodes) = search_assignment(n, depth, budget)?;
    let plan = build_tube_plan(n, Some(&assignment))?;
    let report = verify_setup(&plan, depth)?;
    if !report.pass {
        return Err(TubeError::NoPassingAssignment(n));
    }
    Ok(ResolvedPlan {
        plan,
        report,
        provenance: Provenance::Searched { nodes },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionStep {
    pub level: u32,
    pub order: u32,
    /// The `A` and `B` truncations seen from `T0` shrink (or stay) and stay nonempty.
    pub ab_nested: bool,
    /// `V0` of the previous level lies in `V0` of this level.
    pub v0_nested: bool,
    pub v0_strict: bool,
    /// `U0 ∪ ... ∪ U_level` lies in this level's `V0`.
    pub exhausted: bool,
    pub v0_components: usize,
    #[serde(with = "rational_serde")]
    pub v0_measure: Rational,
}

impl InductionStep {
    pub fn pass(&self) -> bool {
        self.ab_nested && self.v0_nested && self.v0_strict && self.exhausted
    }
}

/// Result of stacking Gabai links of the given orders.
///
/// Everything is expressed in the circle coordinate of `T0`. `maps[i-1]` is
/// the shadow of `h_i^{-1} = g_{n_i} ∘ ... ∘ g_{n_1}`; the image of a set
/// under `h_i`, intersected with `T0`, is its preimage under that map.
#[derive(Clone, Debug)]
pub struct Induction {
    pub orders: Vec<u32>,
    pub depth: u32,
    pub maps: Vec<PLCircleMap>,
    pub reports: Vec<SetupReport>,
    pub steps: Vec<InductionStep>,
}

impl Induction {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass) && self.steps.iter().all(InductionStep::pass)
    }
}

/// Verification depth used for order `n` when `requested` may be too shallow.
pub fn effective_depth(n: u32, requested: u32) -> Result<u32, TubeError> {
    Ok(requested.max(min_depth(tube_parameters(n)?)))
}

pub fn build_induction(orders: &[u32], depth: u32, budget: u64) -> Result<Induction, TubeError> {
    let horizon = orders.len() as u32;
    let table = CantorTable::new(depth.max(horizon));
    let (c1, c2) = (table.c1(depth), table.c2(depth));

    let mut resolved: BTreeMap<u32, ResolvedPlan> = BTreeMap::new();
    let mut composite = PLCircleMap::identity(&IntervalSet::full());
    let (mut a_prev, mut b_prev, mut v0_prev) = (c1.clone(), c2.clone(), u_zero());
    let mut exhausted_target = u_zero();

    let mut out = Induction {
        orders: orders.to_vec(),
        depth,
        maps: Vec::with_capacity(orders.len()),
        reports: Vec::with_capacity(orders.len()),
        steps: Vec::with_capacity(orders.len()),
    };
    for (i, &n) in orders.iter().enumerate() {
        let level = i as u32 + 1;
        let step = match resolved.entry(n) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                e.insert(resolve_plan(n, effective_depth(n, depth)?, None, budget)?)
            }
        };
        composite = PLCircleMap::compose(&step.plan.shadow, &composite)?;
        if composite.pieces().len() > MAX_MAP_PIECES {
            return Err(TubeError::TooLarge(level));
        }
        let a = composite.preimage(&c1);
        let b = composite.preimage(&c2);
        let v0 = composite.preimage(&u_zero());
        exhausted_target = exhausted_target.union(table.level(level));

        out.steps.push(InductionStep {
            level,
            order: n,
            ab_nested: !a.is_empty()
                && !b.is_empty()
                && a.is_subset(&a_prev)
                && b.is_subset(&b_prev),
            v0_nested: v0_prev.is_subset(&v0),
            v0_strict: v0_prev != v0,
            exhausted: exhausted_target.is_subset(&v0),
            v0_components: v0.component_count(),
            v0_measure: v0.measure(),
        });
        out.reports.push(step.report.clone());
        out.maps.push(composite.clone());
        (a_prev, b_prev, v0_prev) = (a, b, v0);
    }
    Ok(out)
}
