use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;

use super::{InverseSequence, ThreadSpace, TransitivityReport};
use crate::error::{Error, Result};
use crate::graph::{Cell, CellSet, FiniteTopology};

/// `G* = G_∞ / r` at depth `D`.
///
/// Classes are the components of the transitive closure of `r_D`, ordered by
/// their least thread; the least thread is also the class representative.
/// The class topology is the quotient topology of the thread space.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    threads: ThreadSpace,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    topology: FiniteTopology,
}

impl QuotientSpace {
    pub fn new(threads: ThreadSpace) -> Result<Self> {
        let n = threads.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (a, b) in threads.relation().pairs() {
            uf.union(a, b);
        }
        let labels = uf.into_labeling();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![usize::MAX; n];
        let mut root_class = vec![usize::MAX; n];
        for t in 0..n {
            let root = labels[t];
            if root_class[root] == usize::MAX {
                root_class[root] = classes.len();
                classes.push(Vec::new());
            }
            class_of[t] = root_class[root];
            classes[root_class[root]].push(t);
        }

        // Minimal open of a class: smallest saturated open set of threads
        // containing it, pushed forward.
        let min_open = (0..classes.len())
            .map(|c| {
                let mut seen = vec![false; n];
                let mut stack: Vec<usize> = classes[c].clone();
                for &t in &stack {
                    seen[t] = true;
                }
                while let Some(t) = stack.pop() {
                    let next = threads.topology().min_open(t).iter().chain(classes[class_of[t]].iter());
                    for &u in next {
                        if !seen[u] {
                            seen[u] = true;
                            stack.push(u);
                        }
                    }
                }
                (0..n).filter(|&t| seen[t]).map(|t| class_of[t]).collect()
            })
            .collect();
        let topology = FiniteTopology::from_min_open(0, min_open)?;
        Ok(QuotientSpace {
            threads,
            classes,
            class_of,
            topology,
        })
    }

    pub fn depth(&self) -> usize {
        self.threads.depth()
    }

    pub fn threads(&self) -> &ThreadSpace {
        &self.threads
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    /// `π(t)`.
    pub fn class_of(&self, thread: usize) -> usize {
        self.class_of[thread]
    }

    pub fn projection(&self) -> &[usize] {
        &self.class_of
    }

    /// Lexicographically least thread of a class.
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn transitivity(&self) -> TransitivityReport {
        self.threads.transitivity()
    }

    /// `π^{-1}(classes)`.
    pub fn preimage(&self, classes: &BTreeSet<usize>) -> CellSet {
        classes.iter().flat_map(|&c| self.classes[c].iter().copied()).collect()
    }

    /// `π(threads)`.
    pub fn image(&self, threads: &CellSet) -> BTreeSet<usize> {
        threads.iter().map(|&t| self.class_of[t]).collect()
    }

    pub fn is_saturated(&self, threads: &CellSet) -> bool {
        threads
            .iter()
            .all(|&t| self.classes[self.class_of[t]].iter().all(|u| threads.contains(u)))
    }
}

pub fn quotient(s: &InverseSequence, depth: usize) -> Result<QuotientSpace> {
    QuotientSpace::new(ThreadSpace::new(s, depth)?)
}

/// `A_{x_i, U}` at depth `D`: classes of threads `z̄` with `z_i ∈ U` for
/// which some level `j` with `i < j ≤ D` separates `z_j` from `w_j` for every
/// thread `w̄` through `B(U, r_i) ∖ U`.
///
/// `x` only fixes the level `i`; whether `U` is a neighbourhood of
/// `B(x, r_i)` is left to the caller.
pub fn a_set(s: &InverseSequence, q: &QuotientSpace, x: Cell, u: &CellSet) -> Result<BTreeSet<usize>> {
    s.check_cell(x)?;
    let i = x.level;
    let depth = q.depth();
    if i >= depth {
        return Err(Error::LevelNotBelowDepth { level: i, depth });
    }
    let level = s.level(i);
    level.check_set(u)?;
    if !level.topology().is_open(u) {
        return Err(Error::NotOpen { level: i });
    }
    let ring: CellSet = level.expand(u, 1).difference(u).copied().collect();
    let space = q.threads();
    let blockers = space.through(i, &ring);

    let mut out = BTreeSet::new();
    for z in space.through(i, u) {
        let zt = space.thread(z);
        let separated = (i + 1..=depth).any(|j| {
            let rel = s.level(j).relation();
            blockers.iter().all(|&w| !rel.contains(zt.at(j), space.thread(w).at(j)))
        });
        if separated {
            out.insert(q.class_of(z));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cantor, dyadic_interval, ex_fcont_g, ex_fcont_h, Topology};

    #[test]
    fn diagonal_classes_are_singletons() {
        let q = quotient(&cantor(3).unwrap(), 3).unwrap();
        assert_eq!(q.len(), 8);
        assert!(q.classes().iter().all(|c| c.len() == 1));
        assert!(q.topology().is_discrete());
    }

    #[test]
    fn ex_fcont_quotients_have_five_classes() {
        let g = quotient(&ex_fcont_g(2, 2, Topology::Khalimsky).unwrap(), 2).unwrap();
        let h = quotient(&ex_fcont_h(2, 2, Topology::Khalimsky).unwrap(), 2).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(h.len(), 5);
        // The collapsed vertical segment carries the Khalimsky structure of
        // the horizontal line: class of (1/4, 0) is open around (1/2, 0).
        assert_eq!(h.topology().min_open(1), &CellSet::from([0, 1, 2]));
        assert_eq!(g.topology(), h.topology());
    }

    #[test]
    fn dyadic_closure_merges_everything() {
        let q = quotient(&dyadic_interval(4, Topology::Discrete).unwrap(), 4).unwrap();
        assert_eq!(q.threads().len(), 16);
        assert_eq!(q.len(), 1);
        assert!(!q.transitivity().transitive);
    }

    #[test]
    fn a_set_vacuous_and_empty_cases() {
        let s = dyadic_interval(3, Topology::Discrete).unwrap();
        let q = quotient(&s, 3).unwrap();
        let x = Cell::new(1, 0);
        let all: CellSet = s.level(1).cells().collect();
        assert_eq!(a_set(&s, &q, x, &all).unwrap().len(), q.len());
        assert!(a_set(&s, &q, x, &CellSet::new()).unwrap().is_empty());
        assert!(matches!(
            a_set(&s, &q, Cell::new(3, 0), &CellSet::new()),
            Err(Error::LevelNotBelowDepth { .. })
        ));
    }

    #[test]
    fn a_set_rejects_non_open_sets() {
        let s = ex_fcont_g(2, 2, Topology::Khalimsky).unwrap();
        let q = quotient(&s, 2).unwrap();
        let err = a_set(&s, &q, Cell::new(1, 1), &CellSet::from([1])).unwrap_err();
        assert!(matches!(err, Error::NotOpen { level: 1 }));
    }
}
