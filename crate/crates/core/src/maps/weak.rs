use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_table, Continuity};
use crate::sequence::{QuotientSpace, Thread, ThreadSpace};

/// A thread map `G_∞ → H_∞` at depth `D`. `table[t]` is the target thread
/// index of source thread `t`, both in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakGCellMap {
    pub depth: usize,
    pub table: Vec<usize>,
}

impl WeakGCellMap {
    pub fn new(src: &ThreadSpace, dst: &ThreadSpace, table: Vec<usize>) -> Result<Self> {
        if src.depth() != dst.depth() {
            return Err(Error::DepthMismatch {
                left: src.depth(),
                right: dst.depth(),
            });
        }
        check_table(&table, src.len(), dst.len())?;
        Ok(WeakGCellMap {
            depth: src.depth(),
            table,
        })
    }

    /// Builds the table from a thread-to-thread function.
    pub fn from_fn<F>(src: &ThreadSpace, dst: &ThreadSpace, mut f: F) -> Result<Self>
    where
        F: FnMut(&Thread) -> Thread,
    {
        let table = src
            .threads()
            .iter()
            .map(|t| {
                let image = f(t);
                dst.index_of(&image).ok_or(Error::NotAThread { level: image.depth() })
            })
            .collect::<Result<Vec<_>>>()?;
        WeakGCellMap::new(src, dst, table)
    }

    pub fn identity(space: &ThreadSpace) -> Self {
        WeakGCellMap {
            depth: space.depth(),
            table: (0..space.len()).collect(),
        }
    }

    pub fn apply(&self, t: usize) -> usize {
        self.table[t]
    }

    fn check(&self, src: &ThreadSpace, dst: &ThreadSpace) -> Result<()> {
        for d in [src.depth(), dst.depth()] {
            if d != self.depth {
                return Err(Error::DepthMismatch {
                    left: self.depth,
                    right: d,
                });
            }
        }
        check_table(&self.table, src.len(), dst.len())
    }
}

/// Verdict of a pair scan; `witness` is the first failing pair in
/// lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

impl PairCheck {
    pub(crate) fn from_witness(witness: Option<(usize, usize)>) -> Self {
        PairCheck {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `(x̄, ȳ) ∈ r ⇒ (f(x̄), f(ȳ)) ∈ s` over all related pairs at depth `D`.
pub fn check_weak_gcell(f: &WeakGCellMap, src: &ThreadSpace, dst: &ThreadSpace) -> Result<PairCheck> {
    f.check(src, dst)?;
    let witness = src
        .relation()
        .pairs()
        .find(|&(a, b)| !dst.related(f.table[a], f.table[b]));
    Ok(PairCheck::from_witness(witness))
}

/// Continuity of a thread map for the depth-`D` product topologies.
pub fn thread_map_continuity(f: &WeakGCellMap, src: &ThreadSpace, dst: &ThreadSpace) -> Result<Continuity> {
    f.check(src, dst)?;
    src.topology().continuity(dst.topology(), &f.table)
}

/// A map of quotient classes at depth `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMap {
    pub depth: usize,
    pub table: Vec<usize>,
}

impl QuotientMap {
    pub fn new(src: &QuotientSpace, dst: &QuotientSpace, table: Vec<usize>) -> Result<Self> {
        if src.depth() != dst.depth() {
            return Err(Error::DepthMismatch {
                left: src.depth(),
                right: dst.depth(),
            });
        }
        check_table(&table, src.len(), dst.len())?;
        Ok(QuotientMap {
            depth: src.depth(),
            table,
        })
    }

    pub fn identity(q: &QuotientSpace) -> Self {
        QuotientMap {
            depth: q.depth(),
            table: (0..q.len()).collect(),
        }
    }

    pub fn apply(&self, c: usize) -> usize {
        self.table[c]
    }

    pub(crate) fn check(&self, src: &QuotientSpace, dst: &QuotientSpace) -> Result<()> {
        for d in [src.depth(), dst.depth()] {
            if d != self.depth {
                return Err(Error::DepthMismatch {
                    left: self.depth,
                    right: d,
                });
            }
        }
        check_table(&self.table, src.len(), dst.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedQuotient {
    pub map: QuotientMap,
    /// `π′ ∘ f = f̂ ∘ π`, checked thread by thread.
    pub commutes: bool,
}

/// `f̂([x̄]) = [f(x̄)]`. Fails with the first two threads of one class whose
/// images lie in different classes.
pub fn induce_quotient_map(f: &WeakGCellMap, qg: &QuotientSpace, qh: &QuotientSpace) -> Result<InducedQuotient> {
    f.check(qg.threads(), qh.threads())?;
    let mut table = Vec::with_capacity(qg.len());
    for class in qg.classes() {
        let first = class[0];
        let image = qh.class_of(f.table[first]);
        if let Some(&other) = class.iter().find(|&&t| qh.class_of(f.table[t]) != image) {
            return Err(Error::IllDefined { first, second: other });
        }
        table.push(image);
    }
    let commutes = (0..qg.threads().len()).all(|t| qh.class_of(f.table[t]) == table[qg.class_of(t)]);
    Ok(InducedQuotient {
        map: QuotientMap { depth: f.depth, table },
        commutes,
    })
}

pub fn check_quotient_map_continuity(map: &QuotientMap, qg: &QuotientSpace, qh: &QuotientSpace) -> Result<Continuity> {
    map.check(qg, qh)?;
    qg.topology().continuity(qh.topology(), &map.table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dyadic_interval, ex_fcont_g, ex_fcont_h, Topology};
    use crate::sequence::quotient;

    #[test]
    fn identity_is_weak_and_induces_identity() {
        let s = dyadic_interval(3, Topology::Discrete).unwrap();
        let q = quotient(&s, 3).unwrap();
        let id = WeakGCellMap::identity(q.threads());
        assert!(check_weak_gcell(&id, q.threads(), q.threads()).unwrap().holds);
        let induced = induce_quotient_map(&id, &q, &q).unwrap();
        assert_eq!(induced.map, QuotientMap::identity(&q));
        assert!(induced.commutes);
        assert!(check_quotient_map_continuity(&induced.map, &q, &q).unwrap().continuous);
    }

    #[test]
    fn splitting_related_threads_is_not_weak() {
        // Threads 0 and 1 of the dyadic interval are related; send 1 far away
        // into a diagonal target.
        let s = dyadic_interval(2, Topology::Discrete).unwrap();
        let src = quotient(&s, 2).unwrap();
        let t = crate::generators::cantor(2).unwrap();
        let dst = quotient(&t, 2).unwrap();
        let f = WeakGCellMap::new(src.threads(), dst.threads(), vec![0, 3, 0, 0]).unwrap();
        let check = check_weak_gcell(&f, src.threads(), dst.threads()).unwrap();
        assert_eq!(check.witness, Some((0, 1)));
        assert_eq!(
            induce_quotient_map(&f, &src, &dst).unwrap_err(),
            Error::IllDefined { first: 0, second: 1 }
        );
    }

    #[test]
    fn depth_mismatch_is_rejected() {
        let s = dyadic_interval(3, Topology::Discrete).unwrap();
        let a = quotient(&s, 2).unwrap();
        let b = quotient(&s, 3).unwrap();
        let f = WeakGCellMap::identity(a.threads());
        assert!(matches!(
            check_weak_gcell(&f, a.threads(), b.threads()),
            Err(Error::DepthMismatch { .. })
        ));
    }

    #[test]
    fn jump_map_is_weak_and_induces_identity() {
        let g = ex_fcont_g(2, 2, Topology::Khalimsky).unwrap();
        let h = ex_fcont_h(2, 2, Topology::Khalimsky).unwrap();
        let qg = quotient(&g, 2).unwrap();
        let qh = quotient(&h, 2).unwrap();
        let jump = crate::generators::ex_fcont_jump(&g, &h, 2).unwrap();
        assert!(check_weak_gcell(&jump, qg.threads(), qh.threads()).unwrap().holds);
        let induced = induce_quotient_map(&jump, &qg, &qh).unwrap();
        assert_eq!(induced.map.table, vec![0, 1, 2, 3, 4]);
        let c = thread_map_continuity(&jump, qg.threads(), qh.threads()).unwrap();
        assert_eq!(c.witness, Some((1, 2)));
    }
}
