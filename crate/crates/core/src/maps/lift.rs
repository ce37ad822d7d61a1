use std::collections::BTreeSet;

use serde::Serialize;

use super::{
    check_gcell_map, check_quotient_map_continuity, gcell_induce_weak, induce_quotient_map, thread_map_continuity,
    AlphaRule, GCellMap, GCellReport, GCellViolation, QuotientMap, WeakGCellMap,
};
use crate::error::{Error, Result};
use crate::graph::{Cell, CellSet, Continuity};
use crate::sequence::{InverseSequence, QuotientSpace};

/// Condition (1) on the target thread space: `π′` is open and every open set
/// is saturated. Witnesses are target thread indices whose minimal open
/// breaks the property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenQuotientCondition {
    pub projection_open: bool,
    pub projection_open_witness: Option<usize>,
    pub saturated: bool,
    pub saturation_witness: Option<usize>,
}

impl OpenQuotientCondition {
    pub fn holds(&self) -> bool {
        self.projection_open && self.saturated
    }
}

/// Condition (2) on one sequence: for every level `n ≤ D` and `x ∈ G_n`,
/// every open `U ⊇ B(x, r_n)` contains `B(O, r_n)` for some open `O ∋ x`.
/// Equivalently `B(U(x), r_n)` lies in the open hull of `B(x, r_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallCondition {
    pub holds: bool,
    pub witness: Option<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub depth: usize,
    pub lift: WeakGCellMap,
    /// `f̂ = F` on every class.
    pub reproduces: bool,
    pub quotient_continuous: Continuity,
    pub condition_1: OpenQuotientCondition,
    /// Evaluated on the source levels.
    pub condition_2: BallCondition,
    /// The same property on the target levels, for reference.
    pub condition_2_target: BallCondition,
    /// `F` continuous and one of the conditions holds.
    pub theorem_applies: bool,
    pub lift_continuity: Continuity,
}

pub fn open_quotient_condition(q: &QuotientSpace) -> OpenQuotientCondition {
    let space = q.threads();
    let mut projection_open_witness = None;
    let mut saturation_witness = None;
    for t in 0..space.len() {
        let open = space.topology().min_open(t);
        let saturation = q.preimage(&q.image(open));
        if saturation_witness.is_none() && saturation != *open {
            saturation_witness = Some(t);
        }
        if projection_open_witness.is_none() && !space.topology().is_open(&saturation) {
            projection_open_witness = Some(t);
        }
    }
    OpenQuotientCondition {
        projection_open: projection_open_witness.is_none(),
        projection_open_witness,
        saturated: saturation_witness.is_none(),
        saturation_witness,
    }
}

pub fn ball_condition(s: &InverseSequence, depth: usize) -> Result<BallCondition> {
    s.check_depth(depth)?;
    for n in 1..=depth {
        let level = s.level(n);
        for x in level.cells() {
            let hull = level.topology().hull(&level.expand(&CellSet::from([x]), 1));
            let reach = level.expand(level.topology().min_open(x), 1);
            if !reach.is_subset(&hull) {
                return Ok(BallCondition {
                    holds: false,
                    witness: Some(Cell::new(n, x)),
                });
            }
        }
    }
    Ok(BallCondition {
        holds: true,
        witness: None,
    })
}

/// `f(x̄)` = representative of `F([x̄])`, given one representative thread per
/// target class.
fn lift_with(map: &QuotientMap, qg: &QuotientSpace, qh: &QuotientSpace, reps: &[usize]) -> Result<WeakGCellMap> {
    let table = (0..qg.threads().len())
        .map(|t| reps[map.apply(qg.class_of(t))])
        .collect();
    WeakGCellMap::new(qg.threads(), qh.threads(), table)
}

/// The lift with lexicographically least representatives and the
/// conditions under which it is guaranteed continuous.
pub fn lift_quotient_map(
    map: &QuotientMap,
    qg: &QuotientSpace,
    qh: &QuotientSpace,
    g: &InverseSequence,
    h: &InverseSequence,
) -> Result<LiftReport> {
    map.check(qg, qh)?;
    let depth = map.depth;
    let reps: Vec<usize> = (0..qh.len()).map(|c| qh.representative(c)).collect();
    let lift = lift_with(map, qg, qh, &reps)?;
    let induced = induce_quotient_map(&lift, qg, qh)?;
    let quotient_continuous = check_quotient_map_continuity(map, qg, qh)?;
    let condition_1 = open_quotient_condition(qh);
    let condition_2 = ball_condition(g, depth)?;
    let condition_2_target = ball_condition(h, depth)?;
    let lift_continuity = thread_map_continuity(&lift, qg.threads(), qh.threads())?;
    Ok(LiftReport {
        depth,
        reproduces: induced.map == *map,
        theorem_applies: quotient_continuous.continuous && (condition_1.holds() || condition_2.holds),
        quotient_continuous,
        condition_1,
        condition_2,
        condition_2_target,
        lift,
        lift_continuity,
    })
}

/// Result of trying every choice of one representative per target class in
/// the image of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeSearch {
    pub choices: usize,
    pub continuous_choices: usize,
    /// Representatives (target thread per image class) of the first
    /// continuous lift in lexicographic order.
    pub first_continuous: Option<Vec<usize>>,
    /// Discontinuity witness of the lexicographically first choice.
    pub first_witness: Option<(usize, usize)>,
}

pub fn search_representatives(
    map: &QuotientMap,
    qg: &QuotientSpace,
    qh: &QuotientSpace,
    limit: usize,
) -> Result<RepresentativeSearch> {
    map.check(qg, qh)?;
    let image: Vec<usize> = map.table.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let total = image
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(qh.class(c).len()))
        .filter(|&n| n <= limit)
        .ok_or_else(|| Error::InvalidParams(format!("more than {limit} representative choices")))?;

    let mut reps: Vec<usize> = (0..qh.len()).map(|c| qh.representative(c)).collect();
    let mut digits = vec![0usize; image.len()];
    let mut continuous_choices = 0;
    let mut first_continuous = None;
    let mut first_witness = None;
    for n in 0..total {
        for (d, &c) in digits.iter().zip(&image) {
            reps[c] = qh.class(c)[*d];
        }
        let lift = lift_with(map, qg, qh, &reps)?;
        let c = thread_map_continuity(&lift, qg.threads(), qh.threads())?;
        if n == 0 {
            first_witness = c.witness;
        }
        if c.continuous {
            continuous_choices += 1;
            if first_continuous.is_none() {
                first_continuous = Some(image.iter().map(|&c| reps[c]).collect());
            }
        }
        // Odometer over the choices, last class fastest.
        for (d, &c) in digits.iter_mut().zip(&image).rev() {
            *d += 1;
            if *d < qh.class(c).len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(RepresentativeSearch {
        choices: total,
        continuous_choices,
        first_continuous,
        first_witness,
    })
}

pub const CONSTRUCT_INTERPRETATION: &str =
    "<x> is the set of depth-D threads through x; h_j is the projection of threads to level j";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructReport {
    pub depth: usize,
    pub interpretation: &'static str,
    pub map: GCellMap,
    pub conditions: GCellReport,
    /// Whether the induced map on quotients equals `F`.
    pub reproduces: Option<bool>,
    /// Experimental: continuity of the induced thread map.
    pub continuity_probe: Option<Continuity>,
}

/// `f(x) ∩ H_j = h_j(π′^{-1}(F(π⟨x⟩)))` whenever
/// `h_j(π′^{-1}(F(π⟨B(x, r_i)⟩)))` is a nonempty simplex, for source levels
/// and target levels up to `D`. Fails when some thread has no coordinate
/// with a nonempty Hausdorff image piece at some target level.
pub fn construct_gcell_from_quotient_map(
    map: &QuotientMap,
    qg: &QuotientSpace,
    qh: &QuotientSpace,
    g: &InverseSequence,
    h: &InverseSequence,
) -> Result<ConstructReport> {
    map.check(qg, qh)?;
    let depth = map.depth;
    let h1 = h.level(1).relation();
    if let Some((a, b)) = h1.non_simplex_witness(&h.level(1).cells().collect()) {
        return Err(Error::NotSimplex { a, b });
    }
    if !check_quotient_map_continuity(map, qg, qh)?.continuous {
        return Err(Error::Discontinuous);
    }
    let gs = qg.threads();
    let hs = qh.threads();
    // h_j(π′^{-1}(F(π(threads)))) for a set of source threads.
    let push = |threads: &CellSet, j: usize| -> CellSet {
        let classes: BTreeSet<usize> = qg.image(threads).into_iter().map(|c| map.apply(c)).collect();
        qh.preimage(&classes).into_iter().map(|t| hs.thread(t).at(j)).collect()
    };

    let f = GCellMap::from_fn(g, h, depth, depth, |x, j| {
        let level = g.level(x.level);
        let ball = level.expand(&CellSet::from([x.index]), 1);
        let around = push(&gs.through(x.level, &ball), j);
        if !around.is_empty() && h.level(j).relation().is_simplex(&around) {
            push(&gs.through(x.level, &CellSet::from([x.index])), j)
        } else {
            CellSet::new()
        }
    })?;
    let conditions = check_gcell_map(&f, g, h, depth)?;
    if let Some(GCellViolation::Limit { thread, k }) = &conditions.limit {
        return Err(Error::EmptinessHypothesis {
            thread: gs.index_of(thread).expect("thread of the source space"),
            target_level: *k,
            depth,
        });
    }
    let (reproduces, continuity_probe) = match gcell_induce_weak(&f, g, h, depth, AlphaRule::default()) {
        Ok(induced) => {
            let same = induce_quotient_map(&induced.map, qg, qh)
                .map(|q| q.map == *map)
                .unwrap_or(false);
            (Some(same), Some(thread_map_continuity(&induced.map, gs, hs)?))
        }
        Err(_) => (None, None),
    };
    Ok(ConstructReport {
        depth,
        interpretation: CONSTRUCT_INTERPRETATION,
        map: f,
        conditions,
        reproduces,
        continuity_probe,
    })
}
