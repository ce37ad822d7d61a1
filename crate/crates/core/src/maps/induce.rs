use serde::Serialize;

use super::gcell::admissible_levels;
use super::{check_semicontinuity, thread_map_continuity, GCellMap, Side, WeakGCellMap};
use crate::error::{Error, Result};
use crate::graph::{Cell, CellSet, Continuity};
use crate::sequence::{InverseSequence, Thread, ThreadSpace};

/// How the source levels `α_i` are chosen among the admissible ones
/// (levels `a ≤ D` with `f(x_a) ∩ H_i` nonempty and Hausdorff).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// `α_i = D`. The deepest coordinate is admissible whenever any level
    /// is, and related threads have related deepest coordinates.
    #[default]
    Deepest,
    /// Least admissible level, then `α_{i+1} ← max(α_{i+1}, α_i + 1)`.
    StrictlyIncreasing,
    /// Least admissible level, then `α_{i+1} ← max(α_{i+1}, α_i)`.
    Nondecreasing,
}

/// Choices made for one source thread.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InduceTrace {
    pub thread: Thread,
    pub alpha: Vec<usize>,
    /// `K_i = f(x_{α_i}) ∩ H_i`.
    pub k_sets: Vec<CellSet>,
    pub image: Thread,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedWeak {
    pub map: WeakGCellMap,
    pub rule: AlphaRule,
    pub traces: Vec<InduceTrace>,
}

/// The weak g-cell map of a g-cell map at depth `D`: for each source thread,
/// pick `α_i`, form `K_i`, check `h_i^{i+1}(K_{i+1}) ⊆ K_i` and take the
/// lexicographically least thread through the `K_i`.
pub fn gcell_induce_weak(
    f: &GCellMap,
    g: &InverseSequence,
    h: &InverseSequence,
    depth: usize,
    rule: AlphaRule,
) -> Result<InducedWeak> {
    f.check(g, h)?;
    let src = ThreadSpace::new(g, depth)?;
    let dst = ThreadSpace::new(h, depth)?;
    if f.target_levels() < depth {
        return Err(Error::DepthOutOfRange {
            depth,
            levels: f.target_levels(),
        });
    }
    let mut table = Vec::with_capacity(src.len());
    let mut traces = Vec::with_capacity(src.len());
    for (ti, t) in src.threads().iter().enumerate() {
        let alpha = choose_alpha(f, h, t, depth, rule).map_err(|k| Error::EmptyK {
            thread: ti,
            target_level: k,
            depth,
        })?;
        let k_sets: Vec<CellSet> = (1..=depth).map(|i| f.at(t.cell(alpha[i - 1]), i).clone()).collect();
        if let Some(k) = (1..=depth).find(|&k| k_sets[k - 1].is_empty()) {
            return Err(Error::EmptyK {
                thread: ti,
                target_level: k,
                depth,
            });
        }
        for i in 1..depth {
            if k_sets[i].iter().any(|&y| !k_sets[i - 1].contains(&h.bond(i, y))) {
                return Err(Error::Nesting {
                    thread: ti,
                    level: i,
                    next: i + 1,
                });
            }
        }
        let image = least_thread(h, &k_sets).ok_or(Error::EmptyK {
            thread: ti,
            target_level: depth,
            depth,
        })?;
        table.push(dst.index_of(&image).expect("selected thread exists"));
        traces.push(InduceTrace {
            thread: t.clone(),
            alpha,
            k_sets,
            image,
        });
    }
    Ok(InducedWeak {
        map: WeakGCellMap::new(&src, &dst, table)?,
        rule,
        traces,
    })
}

/// `Err(k)` names a target level with no admissible source level.
fn choose_alpha(
    f: &GCellMap,
    h: &InverseSequence,
    t: &Thread,
    depth: usize,
    rule: AlphaRule,
) -> std::result::Result<Vec<usize>, usize> {
    let mut alpha = Vec::with_capacity(depth);
    for k in 1..=depth {
        let admissible = admissible_levels(f, h, t, k);
        let least = *admissible.first().ok_or(k)?;
        let a = match (rule, alpha.last()) {
            (AlphaRule::Deepest, _) => *admissible.last().ok_or(k)?,
            (_, None) => least,
            (AlphaRule::StrictlyIncreasing, Some(&prev)) => least.max(prev + 1),
            (AlphaRule::Nondecreasing, Some(&prev)) => least.max(prev),
        };
        if a > depth.min(f.source_levels()) {
            return Err(k);
        }
        alpha.push(a);
    }
    Ok(alpha)
}

/// Lexicographically least depth-`D` thread with `y_i ∈ K_i`.
fn least_thread(h: &InverseSequence, k_sets: &[CellSet]) -> Option<Thread> {
    fn go(h: &InverseSequence, k_sets: &[CellSet], prefix: &mut Vec<usize>) -> bool {
        let n = prefix.len();
        if n == k_sets.len() {
            return true;
        }
        let candidates: Vec<usize> = match prefix.last() {
            None => k_sets[0].iter().copied().collect(),
            Some(&p) => h.preimages(n, p).filter(|y| k_sets[n].contains(y)).collect(),
        };
        for y in candidates {
            prefix.push(y);
            if go(h, k_sets, prefix) {
                return true;
            }
            prefix.pop();
        }
        false
    }
    let mut prefix = Vec::with_capacity(k_sets.len());
    go(h, k_sets, &mut prefix).then_some(Thread(prefix))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingletonReport {
    pub depth: usize,
    pub upper_semicontinuous: bool,
    /// `f(x_i) ∩ H_i` is a singleton for every thread and `i ≤ D`.
    pub singleton: bool,
    /// First thread and level where it is not.
    pub singleton_witness: Option<(Thread, usize)>,
    pub hypotheses_hold: bool,
    /// Continuity of the induced thread map, when it could be built.
    pub continuity: Option<Continuity>,
    pub induce_error: Option<String>,
}

impl SingletonReport {
    /// The conclusion is only asserted under the hypotheses.
    pub fn conclusion_holds(&self) -> Option<bool> {
        if !self.hypotheses_hold {
            return None;
        }
        self.continuity.map(|c| c.continuous)
    }
}

pub fn check_singleton_continuity(
    f: &GCellMap,
    g: &InverseSequence,
    h: &InverseSequence,
    depth: usize,
) -> Result<SingletonReport> {
    let upper = check_semicontinuity(f, g, h, Side::Upper)?.holds;
    let src = ThreadSpace::new(g, depth)?;
    let levels = depth.min(f.target_levels()).min(f.source_levels());
    let singleton_witness = src.threads().iter().find_map(|t| {
        (1..=levels)
            .find(|&i| f.at(Cell::new(i, t.at(i)), i).len() != 1)
            .map(|i| (t.clone(), i))
    });
    let singleton = singleton_witness.is_none();
    let (continuity, induce_error) = match gcell_induce_weak(f, g, h, depth, AlphaRule::default()) {
        Ok(induced) => {
            let dst = ThreadSpace::new(h, depth)?;
            (Some(thread_map_continuity(&induced.map, &src, &dst)?), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SingletonReport {
        depth,
        upper_semicontinuous: upper,
        singleton,
        singleton_witness,
        hypotheses_hold: upper && singleton,
        continuity,
        induce_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dyadic_interval, full_image_map, Topology};
    use crate::maps::{check_weak_gcell, family_to_gcell, LevelMapFamily};

    #[test]
    fn full_image_selects_least_thread() {
        let (g, h, f) = full_image_map(3, Topology::Discrete).unwrap();
        let induced = gcell_induce_weak(&f, &g, &h, 3, AlphaRule::default()).unwrap();
        for tr in &induced.traces {
            for (i, k) in tr.k_sets.iter().enumerate() {
                assert_eq!(k.len(), h.level(i + 1).len());
            }
            assert_eq!(tr.image, Thread(vec![0, 0, 0]));
        }
    }

    #[test]
    fn identity_family_induces_identity() {
        let s = dyadic_interval(4, Topology::Discrete).unwrap();
        let f = family_to_gcell(&LevelMapFamily::identity(&s), &s, &s).unwrap();
        for rule in [
            AlphaRule::Deepest,
            AlphaRule::StrictlyIncreasing,
            AlphaRule::Nondecreasing,
        ] {
            let induced = gcell_induce_weak(&f, &s, &s, 4, rule).unwrap();
            let space = ThreadSpace::new(&s, 4).unwrap();
            assert_eq!(induced.map, WeakGCellMap::identity(&space));
            assert!(check_weak_gcell(&induced.map, &space, &space).unwrap().holds);
        }
        let r = check_singleton_continuity(&f, &s, &s, 4).unwrap();
        assert!(r.hypotheses_hold);
        assert_eq!(r.conclusion_holds(), Some(true));
    }

    #[test]
    fn empty_k_names_condition_four() {
        let (g, h, mut f) = full_image_map(2, Topology::Discrete).unwrap();
        for x in g.level(2).cells() {
            f.set(Cell::new(2, x), 2, CellSet::new());
        }
        let err = gcell_induce_weak(&f, &g, &h, 2, AlphaRule::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyK { target_level: 2, .. }));
    }

    #[test]
    fn full_image_fails_the_singleton_hypothesis() {
        let (g, h, f) = full_image_map(3, Topology::Discrete).unwrap();
        let r = check_singleton_continuity(&f, &g, &h, 3).unwrap();
        assert!(r.upper_semicontinuous);
        assert!(!r.singleton);
        assert_eq!(r.conclusion_holds(), None);
    }
}
