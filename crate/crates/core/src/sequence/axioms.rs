use serde::Serialize;

use super::{enumerate_threads, InverseSequence, Thread};
use crate::error::Result;
use crate::graph::{Cell, CellSet};

/// A thread and level `i` for which no `j ≤ D` contracts the ball.
/// `cell` is a level-`D` cell of the ball whose projection lands outside
/// `B(x_i, r_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionFailure {
    pub thread: Thread,
    pub level: usize,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformLevel {
    pub level: usize,
    /// Least `j` with `g_i^j(B(x, 2r_j)) ⊆ B(g_i^j(x), r_i)` for all `x ∈ G_j`.
    pub least_j: Option<usize>,
}

/// Cell-structure axioms at depth `D`, for levels `i < D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub depth: usize,
    /// (a) per thread: `least_j[t][i - 1]` is the least `j ∈ [i, D]` with
    /// `g_i^j(B(x_j, 2r_j)) ⊆ B(x_i, r_i)`.
    pub per_thread: bool,
    pub least_j: Vec<Vec<Option<usize>>>,
    pub per_thread_failure: Option<ContractionFailure>,
    /// (b) uniform in `x`.
    pub uniform: bool,
    pub uniform_levels: Vec<UniformLevel>,
    /// (c) projected 1-balls are finite; always true for finite levels.
    pub finiteness: bool,
    /// (d) per thread with `3r_j` in place of `2r_j`.
    pub three_ball: bool,
    pub three_ball_failure: Option<ContractionFailure>,
    pub discrete_levels: bool,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.per_thread && self.finiteness
    }
}

fn projected_ball(s: &InverseSequence, x: Cell, k: usize, to: usize) -> CellSet {
    s.level(x.level)
        .expand(&CellSet::from([x.index]), k)
        .into_iter()
        .map(|c| s.project(Cell::new(x.level, c), to))
        .collect()
}

/// Least `j ∈ [i, D]` with `g_i^j(B(x_j, k r_j)) ⊆ B(x_i, r_i)`.
fn least_contraction(s: &InverseSequence, t: &Thread, i: usize, k: usize) -> Option<usize> {
    let target = s.level(i).expand(&CellSet::from([t.at(i)]), 1);
    (i..=t.depth()).find(|&j| projected_ball(s, t.cell(j), k, i).is_subset(&target))
}

fn failure(s: &InverseSequence, t: &Thread, i: usize, k: usize) -> ContractionFailure {
    let depth = t.depth();
    let target = s.level(i).expand(&CellSet::from([t.at(i)]), 1);
    let cell = s
        .level(depth)
        .expand(&CellSet::from([t.at(depth)]), k)
        .into_iter()
        .find(|&c| !target.contains(&s.project(Cell::new(depth, c), i)))
        .expect("contraction fails at depth D");
    ContractionFailure {
        thread: t.clone(),
        level: i,
        cell,
    }
}

pub fn check_cell_structure(s: &InverseSequence, depth: usize) -> Result<AxiomReport> {
    let threads = enumerate_threads(s, depth)?;

    let mut least_j = Vec::with_capacity(threads.len());
    let mut per_thread_failure = None;
    let mut three_ball_failure = None;
    for t in &threads {
        let mut row = Vec::with_capacity(depth.saturating_sub(1));
        for i in 1..depth {
            let j = least_contraction(s, t, i, 2);
            if j.is_none() && per_thread_failure.is_none() {
                per_thread_failure = Some(failure(s, t, i, 2));
            }
            row.push(j);
            if three_ball_failure.is_none() && least_contraction(s, t, i, 3).is_none() {
                three_ball_failure = Some(failure(s, t, i, 3));
            }
        }
        least_j.push(row);
    }

    let uniform_levels: Vec<UniformLevel> = (1..depth)
        .map(|i| UniformLevel {
            level: i,
            least_j: (i..=depth).find(|&j| uniform_contracts(s, i, j)),
        })
        .collect();

    Ok(AxiomReport {
        depth,
        per_thread: per_thread_failure.is_none(),
        least_j,
        per_thread_failure,
        uniform: uniform_levels.iter().all(|u| u.least_j.is_some()),
        uniform_levels,
        finiteness: true,
        three_ball: three_ball_failure.is_none(),
        three_ball_failure,
        discrete_levels: s.levels().iter().all(|g| g.topology().is_discrete()),
    })
}

/// `g_i^j(B(x, 2r_j)) ⊆ B(g_i^j(x), r_i)` for every `x ∈ G_j`.
pub fn uniform_contracts(s: &InverseSequence, i: usize, j: usize) -> bool {
    s.level(j).cells().all(|x| {
        let target = s.level(i).expand(&CellSet::from([s.project(Cell::new(j, x), i)]), 1);
        projected_ball(s, Cell::new(j, x), 2, i).is_subset(&target)
    })
}
