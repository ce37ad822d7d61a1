use serde::Serialize;

use super::{InverseSequence, Thread};
use crate::error::{Error, Result};
use crate::graph::Cell;

/// `a ∈ G_m`, `b ∈ G_n` are close iff `(g_k^m(a), g_k^n(b)) ∈ r_k` with
/// `k = min(m, n)`.
pub fn is_close(s: &InverseSequence, a: Cell, b: Cell) -> Result<bool> {
    s.check_cell(a)?;
    s.check_cell(b)?;
    Ok(close(s, a, b))
}

pub(crate) fn close(s: &InverseSequence, a: Cell, b: Cell) -> bool {
    let k = a.level.min(b.level);
    s.level(k).related(s.project(a, k), s.project(b, k))
}

/// A finite prefix `u_1, …, u_len` with a declared threshold `N`; the
/// tail is `u_{N+1}, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellSequence {
    pub entries: Vec<Cell>,
    pub declared_n: usize,
}

impl CellSequence {
    pub fn new(entries: Vec<Cell>, declared_n: usize) -> Result<Self> {
        if declared_n >= entries.len() {
            return Err(Error::ThresholdTooLarge {
                declared: declared_n,
                len: entries.len(),
            });
        }
        Ok(CellSequence { entries, declared_n })
    }

    /// `u_j = x_j` for `j = 1..=D`.
    pub fn from_thread(t: &Thread) -> Self {
        CellSequence {
            entries: (1..=t.depth()).map(|n| t.cell(n)).collect(),
            declared_n: 0,
        }
    }

    pub fn tail(&self) -> &[Cell] {
        &self.entries[self.declared_n..]
    }

    fn check(&self, s: &InverseSequence) -> Result<()> {
        if self.declared_n >= self.entries.len() {
            return Err(Error::ThresholdTooLarge {
                declared: self.declared_n,
                len: self.entries.len(),
            });
        }
        self.entries.iter().try_for_each(|&c| s.check_cell(c))
    }
}

/// Positions are 1-based sequence indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CauchyFailure {
    /// Fewer than two entries past `N`: no evidence that degrees grow.
    ShortTail,
    /// `deg(u_{position + 1}) ≤ deg(u_position)` past `N`.
    Degree { position: usize },
    /// `u_first` and `u_second` are not close.
    NotClose { first: usize, second: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyVerdict {
    pub cauchy: bool,
    pub failure: Option<CauchyFailure>,
}

/// Levels strictly increase past `N` (the finite stand-in for
/// `deg(u_j) → ∞`) and tail entries are pairwise close.
pub fn is_cauchy(s: &InverseSequence, seq: &CellSequence) -> Result<CauchyVerdict> {
    seq.check(s)?;
    let n = seq.declared_n;
    let tail = seq.tail();
    let failure = if tail.len() < 2 {
        Some(CauchyFailure::ShortTail)
    } else if let Some(p) = (1..tail.len()).find(|&p| tail[p].level <= tail[p - 1].level) {
        Some(CauchyFailure::Degree { position: n + p })
    } else {
        tail.iter()
            .enumerate()
            .flat_map(|(a, &u)| {
                tail[a + 1..]
                    .iter()
                    .enumerate()
                    .map(move |(b, &v)| (a, a + 1 + b, u, v))
            })
            .find(|&(_, _, u, v)| !close(s, u, v))
            .map(|(a, b, _, _)| CauchyFailure::NotClose {
                first: n + a + 1,
                second: n + b + 1,
            })
    };
    Ok(CauchyVerdict {
        cauchy: failure.is_none(),
        failure,
    })
}

fn check_depth(seq: &CellSequence, depth: usize) -> Result<()> {
    let needed = seq.tail().iter().map(|c| c.level).max().unwrap_or(0);
    if depth < needed {
        return Err(Error::InsufficientDepth { depth, needed });
    }
    Ok(())
}

/// `x_i` close to `u_j` for all `i, j > N` within the thread and prefix.
pub fn converges_to(s: &InverseSequence, seq: &CellSequence, t: &Thread) -> Result<bool> {
    seq.check(s)?;
    t.validate(s)?;
    check_depth(seq, t.depth())?;
    Ok(converges_unchecked(s, seq, t))
}

fn converges_unchecked(s: &InverseSequence, seq: &CellSequence, t: &Thread) -> bool {
    (seq.declared_n + 1..=t.depth()).all(|i| seq.tail().iter().all(|&u| close(s, t.cell(i), u)))
}

/// Depth-`D` thread the sequence converges to, by depth-first search over
/// compatible coordinates. At each level the projection of the deepest tail
/// entry is tried first, then cells in id order, so a sequence sampled from a
/// thread returns that thread. `None` means no depth-`D` limit exists.
pub fn find_limit(s: &InverseSequence, seq: &CellSequence, depth: usize) -> Result<Option<Thread>> {
    s.check_depth(depth)?;
    let verdict = is_cauchy(s, seq)?;
    if let Some(f) = verdict.failure {
        return Err(Error::NotCauchy(format!("{f:?}")));
    }
    check_depth(seq, depth)?;
    Ok(search_limit(s, seq, depth))
}

pub(crate) fn search_limit(s: &InverseSequence, seq: &CellSequence, depth: usize) -> Option<Thread> {
    let anchor = *seq.tail().iter().max_by_key(|c| c.level)?;
    let admissible =
        |n: usize, x: usize| n <= seq.declared_n || seq.tail().iter().all(|&u| close(s, Cell::new(n, x), u));
    let order = |n: usize, mut cands: Vec<usize>| {
        if n <= anchor.level {
            let p = s.project(anchor, n);
            if let Some(pos) = cands.iter().position(|&c| c == p) {
                let c = cands.remove(pos);
                cands.insert(0, c);
            }
        }
        cands
    };

    let mut stack: Vec<Vec<usize>> = Vec::with_capacity(depth);
    let mut prefix: Vec<usize> = Vec::with_capacity(depth);
    stack.push(order(1, s.level(1).cells().filter(|&x| admissible(1, x)).collect()));
    loop {
        let n = prefix.len() + 1;
        let top = stack.last_mut()?;
        if top.is_empty() {
            stack.pop();
            prefix.pop()?;
            continue;
        }
        let x = top.remove(0);
        prefix.push(x);
        if n == depth {
            return Some(Thread(prefix));
        }
        let children = s.preimages(n, x).filter(|&y| admissible(n + 1, y)).collect();
        stack.push(order(n + 1, children));
    }
}
