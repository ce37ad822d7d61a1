use std::collections::HashMap;

use serde::Serialize;

use super::InverseSequence;
use crate::error::{Error, Result};
use crate::graph::{Cell, CellSet, FiniteTopology, Relation};

/// A depth-`D` thread `(x_1, …, x_D)`; `coords[n - 1]` is a cell index of level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Thread(pub Vec<usize>);

impl Thread {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Coordinate at level `n` (1-based).
    pub fn at(&self, n: usize) -> usize {
        self.0[n - 1]
    }

    pub fn cell(&self, n: usize) -> Cell {
        Cell::new(n, self.0[n - 1])
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// Checks `g_n^{n+1}(x_{n+1}) = x_n` for `n < D`.
    pub fn validate(&self, s: &InverseSequence) -> Result<()> {
        s.check_depth(self.depth())?;
        for n in 1..=self.depth() {
            s.level(n).check_cell(self.at(n))?;
        }
        for n in 1..self.depth() {
            if s.bond(n, self.at(n + 1)) != self.at(n) {
                return Err(Error::NotAThread { level: n + 1 });
            }
        }
        Ok(())
    }
}

/// All compatible vectors at depth `D`, in lexicographic order.
pub fn enumerate_threads(s: &InverseSequence, depth: usize) -> Result<Vec<Thread>> {
    s.check_depth(depth)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(depth);
    for x in s.level(1).cells() {
        prefix.push(x);
        extend(s, depth, &mut prefix, &mut out);
        prefix.pop();
    }
    Ok(out)
}

fn extend(s: &InverseSequence, depth: usize, prefix: &mut Vec<usize>, out: &mut Vec<Thread>) {
    let n = prefix.len();
    if n == depth {
        out.push(Thread(prefix.clone()));
        return;
    }
    let parent = prefix[n - 1];
    let children: Vec<usize> = s.preimages(n, parent).collect();
    for x in children {
        prefix.push(x);
        extend(s, depth, prefix, out);
        prefix.pop();
    }
}

/// Transitivity of the depth-`D` thread relation. A witness `(a, b, c)`
/// has `a ~ b`, `b ~ c` and `a ≁ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub transitive: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// Threads of one sequence at depth `D`, with the natural relation `r_D`
/// and the product topology restricted to threads.
#[derive(Clone, Debug)]
pub struct ThreadSpace {
    depth: usize,
    threads: Vec<Thread>,
    lookup: HashMap<Thread, usize>,
    relation: Relation,
    topology: FiniteTopology,
    transitivity: TransitivityReport,
}

impl ThreadSpace {
    pub fn new(s: &InverseSequence, depth: usize) -> Result<Self> {
        let threads = enumerate_threads(s, depth)?;
        let lookup: HashMap<Thread, usize> = threads.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        // Threads are determined by their last coordinate.
        let mut by_last: Vec<Option<usize>> = vec![None; s.level(depth).len()];
        for (i, t) in threads.iter().enumerate() {
            by_last[t.at(depth)] = Some(i);
        }
        let top = s.level(depth);

        let mut pairs = Vec::new();
        let mut min_open = Vec::with_capacity(threads.len());
        for (a, t) in threads.iter().enumerate() {
            for &last in top.relation().neighbors(t.at(depth)) {
                if let Some(b) = by_last[last] {
                    let u = &threads[b];
                    if (1..=depth).all(|n| s.level(n).related(t.at(n), u.at(n))) {
                        pairs.push((a, b));
                    }
                }
            }
            let open: CellSet = top
                .topology()
                .min_open(t.at(depth))
                .iter()
                .filter_map(|&last| by_last[last])
                .filter(|&b| {
                    let u = &threads[b];
                    (1..=depth).all(|n| s.level(n).topology().min_open(t.at(n)).contains(&u.at(n)))
                })
                .collect();
            min_open.push(open);
        }
        let relation = Relation::closure(threads.len(), pairs)?;
        // The product of finite topologies restricted to a subspace is again
        // a valid minimal-open table.
        let topology = FiniteTopology::from_min_open(0, min_open)?;
        let transitivity = transitivity(&relation);
        Ok(ThreadSpace {
            depth,
            threads,
            lookup,
            relation,
            topology,
            transitivity,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.threads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }

    pub fn threads(&self) -> &[Thread] {
        &self.threads
    }

    pub fn thread(&self, i: usize) -> &Thread {
        &self.threads[i]
    }

    pub fn index_of(&self, t: &Thread) -> Option<usize> {
        self.lookup.get(t).copied()
    }

    /// Thread through the depth-`D` cell `last`.
    pub fn through_last(&self, last: usize) -> Option<usize> {
        self.threads.iter().position(|t| t.at(self.depth) == last)
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.relation.contains(a, b)
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn transitivity(&self) -> TransitivityReport {
        self.transitivity
    }

    /// `p_i^{-1}(set)`: threads whose level-`i` coordinate lies in `set`.
    pub fn through(&self, level: usize, set: &CellSet) -> CellSet {
        self.threads
            .iter()
            .enumerate()
            .filter(|(_, t)| set.contains(&t.at(level)))
            .map(|(i, _)| i)
            .collect()
    }
}

fn transitivity(r: &Relation) -> TransitivityReport {
    for a in 0..r.len() {
        for &b in r.neighbors(a) {
            for &c in r.neighbors(b) {
                if !r.contains(a, c) {
                    return TransitivityReport {
                        transitive: false,
                        witness: Some((a, b, c)),
                    };
                }
            }
        }
    }
    TransitivityReport {
        transitive: true,
        witness: None,
    }
}

/// `r_D` on depth-`D` threads (coordinatewise relatedness at every level
/// `≤ D`) and its transitivity report.
pub fn thread_relation(s: &InverseSequence, depth: usize) -> Result<(Relation, TransitivityReport)> {
    let space = ThreadSpace::new(s, depth)?;
    Ok((space.relation.clone(), space.transitivity))
}
