//! Finite cellular graphs: a cell set, a reflexive-symmetric relation and a
//! finite topology given by minimal open neighbourhoods.
//!
//! Cells of a level are addressed by their position in the level's id list.
//! Ids are kept in strictly increasing lexicographic order, so comparing
//! indices is the same as comparing ids.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

/// Set of cell indices within one level.
pub type CellSet = BTreeSet<usize>;

/// A cell of some level `G_n` (levels start at 1). The level is also the
/// cell's degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub level: usize,
    pub index: usize,
}

impl Cell {
    pub fn new(level: usize, index: usize) -> Self {
        Cell { level, index }
    }

    pub fn degree(&self) -> usize {
        self.level
    }
}

/// A reflexive, symmetric relation on `0..len`, stored as sorted neighbour lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    neighbors: Vec<Vec<usize>>,
}

impl Relation {
    pub fn diagonal(len: usize) -> Self {
        Relation {
            neighbors: (0..len).map(|u| vec![u]).collect(),
        }
    }

    /// Every pair related.
    pub fn complete(len: usize) -> Self {
        Relation {
            neighbors: (0..len).map(|_| (0..len).collect()).collect(),
        }
    }

    /// Reflexive-symmetric closure of `pairs` over `0..len`.
    pub fn closure<I>(len: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut sets: Vec<BTreeSet<usize>> = (0..len).map(|u| BTreeSet::from([u])).collect();
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= len {
                    return Err(Error::CellOutOfRange { level: 0, index: x });
                }
            }
            sets[a].insert(b);
            sets[b].insert(a);
        }
        Ok(Relation {
            neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.neighbors.get(u).is_some_and(|n| n.binary_search(&v).is_ok())
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    /// All ordered pairs, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, n)| n.iter().map(move |&v| (u, v)))
    }

    pub fn pair_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|u| self.contains(u, u))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(u, v)| self.contains(v, u))
    }

    pub fn is_diagonal(&self) -> bool {
        self.neighbors.iter().all(|n| n.len() == 1)
    }

    /// Any two elements of `set` related.
    pub fn is_simplex(&self, set: &CellSet) -> bool {
        self.non_simplex_witness(set).is_none()
    }

    pub fn non_simplex_witness(&self, set: &CellSet) -> Option<(usize, usize)> {
        set.iter()
            .flat_map(|&a| set.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !self.contains(a, b))
    }
}

/// A finite topology, given by the minimal open set of every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    min_open: Vec<CellSet>,
}

impl FiniteTopology {
    pub fn discrete(len: usize) -> Self {
        FiniteTopology {
            min_open: (0..len).map(|u| CellSet::from([u])).collect(),
        }
    }

    /// Validates `u ∈ U(u)` and `v ∈ U(u) ⇒ U(v) ⊆ U(u)`.
    pub fn from_min_open(level: usize, min_open: Vec<CellSet>) -> Result<Self> {
        let len = min_open.len();
        for (u, open) in min_open.iter().enumerate() {
            if !open.contains(&u) {
                return Err(Error::InvalidTopology {
                    level,
                    reason: format!("point {u} is missing from its minimal open set"),
                });
            }
            if let Some(&v) = open.iter().find(|&&v| v >= len) {
                return Err(Error::CellOutOfRange { level, index: v });
            }
            for &v in open {
                if !min_open[v].is_subset(open) {
                    return Err(Error::InvalidTopology {
                        level,
                        reason: format!("minimal open of {v} is not inside the minimal open of {u}"),
                    });
                }
            }
        }
        Ok(FiniteTopology { min_open })
    }

    /// Khalimsky-style topology on a graph whose edges alternate between open
    /// and closed points: an open point's minimal open set is itself plus its
    /// neighbours, a closed point is alone in its minimal open set.
    pub fn khalimsky(level: usize, relation: &Relation, open: &[bool]) -> Result<Self> {
        let min_open = (0..relation.len())
            .map(|u| {
                if open[u] {
                    relation.neighbors(u).iter().copied().collect()
                } else {
                    CellSet::from([u])
                }
            })
            .collect();
        Self::from_min_open(level, min_open)
    }

    /// Khalimsky line on `0..len` with odd points open when `odd_open`.
    pub fn khalimsky_line(len: usize, odd_open: bool) -> Self {
        let min_open = (0..len)
            .map(|u| {
                if (u % 2 == 1) == odd_open {
                    (u.saturating_sub(1)..=(u + 1).min(len - 1)).collect()
                } else {
                    CellSet::from([u])
                }
            })
            .collect();
        FiniteTopology { min_open }
    }

    pub fn len(&self) -> usize {
        self.min_open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min_open.is_empty()
    }

    pub fn min_open(&self, u: usize) -> &CellSet {
        &self.min_open[u]
    }

    pub fn is_discrete(&self) -> bool {
        self.min_open.iter().all(|o| o.len() == 1)
    }

    /// `S` is open iff it contains the minimal open set of each of its points.
    pub fn is_open(&self, set: &CellSet) -> bool {
        set.iter().all(|&u| self.min_open[u].is_subset(set))
    }

    /// Smallest open set containing `set`.
    pub fn hull(&self, set: &CellSet) -> CellSet {
        set.iter().flat_map(|&u| self.min_open[u].iter().copied()).collect()
    }

    /// Subspace on `set` is Hausdorff. For finite spaces this means the
    /// subspace is discrete.
    pub fn is_hausdorff_on(&self, set: &CellSet) -> bool {
        set.iter().all(|&u| self.min_open[u].intersection(set).all(|&v| v == u))
    }

    /// Continuity of `f` into `dst`: `f(U(x)) ⊆ U(f(x))` for every `x`.
    pub fn continuity(&self, dst: &FiniteTopology, f: &[usize]) -> Result<Continuity> {
        check_table(f, self.len(), dst.len())?;
        for x in 0..self.len() {
            let target = dst.min_open(f[x]);
            if let Some(&y) = self.min_open[x].iter().find(|&&y| !target.contains(&f[y])) {
                return Ok(Continuity::fails(x, y));
            }
        }
        Ok(Continuity::holds())
    }
}

pub(crate) fn check_table(f: &[usize], domain: usize, codomain: usize) -> Result<()> {
    if f.len() != domain {
        return Err(Error::NonTotal {
            index: f.len().min(domain),
        });
    }
    if let Some(&image) = f.iter().find(|&&y| y >= codomain) {
        return Err(Error::ImageOutOfRange { image, size: codomain });
    }
    Ok(())
}

/// Outcome of a continuity check. On failure `witness = (x, y)` with
/// `y ∈ U(x)` but `f(y) ∉ U(f(x))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Continuity {
    pub continuous: bool,
    pub witness: Option<(usize, usize)>,
}

impl Continuity {
    pub fn holds() -> Self {
        Continuity {
            continuous: true,
            witness: None,
        }
    }

    pub fn fails(x: usize, y: usize) -> Self {
        Continuity {
            continuous: false,
            witness: Some((x, y)),
        }
    }
}

/// One level `(G_n, r_n)` with its finite topology.
#[derive(Clone, Debug)]
pub struct CellularGraph {
    level: usize,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    relation: Relation,
    topology: FiniteTopology,
}

impl PartialEq for CellularGraph {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.ids == other.ids
            && self.relation == other.relation
            && self.topology == other.topology
    }
}

impl CellularGraph {
    /// `ids` must be strictly increasing; `relation` and `topology` are indexed
    /// by position in `ids`.
    pub fn new(level: usize, ids: Vec<String>, relation: Relation, topology: FiniteTopology) -> Result<Self> {
        if let Some(w) = ids.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::DuplicateCell {
                level,
                id: w[1].clone(),
            });
        }
        if relation.len() != ids.len() || topology.len() != ids.len() {
            return Err(Error::CellOutOfRange {
                level,
                index: relation.len().max(topology.len()),
            });
        }
        if !relation.is_reflexive() || !relation.is_symmetric() {
            return Err(Error::InvalidTopology {
                level,
                reason: "relation is not reflexive and symmetric".into(),
            });
        }
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(CellularGraph {
            level,
            ids,
            index,
            relation,
            topology,
        })
    }

    /// Builds a level from ids in any order, closing `pairs` and reading an
    /// optional minimal-open table (missing entries default to `{u}`).
    pub fn from_ids<S: AsRef<str>>(
        level: usize,
        ids: &[S],
        pairs: &[(S, S)],
        min_open: Option<&[(S, Vec<S>)]>,
    ) -> Result<Self> {
        let mut sorted: Vec<String> = ids.iter().map(|s| s.as_ref().to_owned()).collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCell {
                level,
                id: w[0].clone(),
            });
        }
        let lookup: HashMap<&str, usize> = sorted.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let resolve = |s: &S| -> Result<usize> {
            lookup.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownCell {
                level,
                id: s.as_ref().to_owned(),
            })
        };
        let indexed = pairs
            .iter()
            .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let relation = Relation::closure(sorted.len(), indexed)?;
        let topology = match min_open {
            None => FiniteTopology::discrete(sorted.len()),
            Some(table) => {
                let mut opens: Vec<CellSet> = (0..sorted.len()).map(|u| CellSet::from([u])).collect();
                for (u, open) in table {
                    let u = resolve(u)?;
                    opens[u] = open.iter().map(&resolve).collect::<Result<_>>()?;
                }
                FiniteTopology::from_min_open(level, opens)?
            }
        };
        CellularGraph::new(level, sorted, relation, topology)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub(crate) fn set_level(&mut self, level: usize) {
        self.level = level;
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, u: usize) -> &str {
        &self.ids[u]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownCell {
            level: self.level,
            id: id.to_owned(),
        })
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn with_topology(mut self, topology: FiniteTopology) -> Result<Self> {
        if topology.len() != self.len() {
            return Err(Error::InvalidTopology {
                level: self.level,
                reason: "topology size does not match the cell set".into(),
            });
        }
        self.topology = topology;
        Ok(self)
    }

    pub fn related(&self, u: usize, v: usize) -> bool {
        self.relation.contains(u, v)
    }

    pub fn cells(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub(crate) fn check_cell(&self, u: usize) -> Result<()> {
        if u < self.len() {
            Ok(())
        } else {
            Err(Error::CellOutOfRange {
                level: self.level,
                index: u,
            })
        }
    }

    pub(crate) fn check_set(&self, set: &CellSet) -> Result<()> {
        match set.iter().next_back() {
            Some(&u) => self.check_cell(u),
            None => Ok(()),
        }
    }

    /// `steps`-fold relational neighbourhood of `set`.
    pub(crate) fn expand(&self, set: &CellSet, steps: usize) -> CellSet {
        let mut current = set.clone();
        for _ in 0..steps {
            current = current
                .iter()
                .flat_map(|&u| self.relation.neighbors(u).iter().copied())
                .collect();
        }
        current
    }
}

/// Reflexive-symmetric closure of `pairs` over the listed cells; indices
/// follow the order of `cells`.
pub fn close_relation<S: AsRef<str>, T: AsRef<str>>(cells: &[S], pairs: &[(T, T)]) -> Result<Relation> {
    let lookup: HashMap<&str, usize> = cells.iter().enumerate().map(|(i, s)| (s.as_ref(), i)).collect();
    let resolve = |s: &T| -> Result<usize> {
        lookup.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownCell {
            level: 0,
            id: s.as_ref().to_owned(),
        })
    };
    let indexed = pairs
        .iter()
        .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Relation::closure(cells.len(), indexed)
}

/// `B(u, k·r)` for `k ∈ {1, 2, 3}`.
pub fn ball(g: &CellularGraph, u: usize, k: usize) -> Result<CellSet> {
    g.check_cell(u)?;
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidRadius(k));
    }
    Ok(g.expand(&CellSet::from([u]), k))
}

/// `B(A, r)`: union of the 1-balls around the members of `set`.
pub fn ball_of_set(g: &CellularGraph, set: &CellSet) -> Result<CellSet> {
    g.check_set(set)?;
    Ok(g.expand(set, 1))
}

pub fn is_open(g: &CellularGraph, set: &CellSet) -> Result<bool> {
    g.check_set(set)?;
    Ok(g.topology().is_open(set))
}

/// Continuity of a single-valued cell table between two levels' topologies.
pub fn is_continuous_map(src: &CellularGraph, dst: &CellularGraph, f: &[usize]) -> Result<Continuity> {
    src.topology().continuity(dst.topology(), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> CellularGraph {
        let ids: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let rel = Relation::closure(n, (1..n).map(|i| (i - 1, i))).unwrap();
        CellularGraph::new(1, ids, rel, FiniteTopology::discrete(n)).unwrap()
    }

    #[test]
    fn closure_of_empty_is_diagonal() {
        let r = close_relation(&["a", "b"], &[] as &[(&str, &str)]).unwrap();
        assert_eq!(r, Relation::diagonal(2));
    }

    #[test]
    fn closure_symmetrises_and_is_idempotent() {
        let r = close_relation(&["a", "b"], &[("a", "b")]).unwrap();
        let pairs: Vec<_> = r.pairs().collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let again = Relation::closure(2, r.pairs()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn closure_rejects_unknown_ids() {
        let err = close_relation(&["a"], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::UnknownCell { .. }));
    }

    #[test]
    fn balls_on_a_path() {
        let g = path(7);
        assert_eq!(ball(&g, 3, 1).unwrap(), CellSet::from([2, 3, 4]));
        assert_eq!(ball(&g, 3, 2).unwrap(), (1..=5).collect());
        assert_eq!(ball(&g, 3, 3).unwrap(), (0..=6).collect());
        assert_eq!(ball(&g, 0, 2).unwrap(), CellSet::from([0, 1, 2]));
        assert!(matches!(ball(&g, 3, 4), Err(Error::InvalidRadius(4))));
        assert!(matches!(ball(&g, 0, 0), Err(Error::InvalidRadius(0))));
        assert!(ball(&g, 9, 1).is_err());
    }

    #[test]
    fn diagonal_balls_are_singletons() {
        let g = CellularGraph::new(
            1,
            vec!["a".into(), "b".into()],
            Relation::diagonal(2),
            FiniteTopology::discrete(2),
        )
        .unwrap();
        for k in 1..=3 {
            assert_eq!(ball(&g, 1, k).unwrap(), CellSet::from([1]));
        }
    }

    #[test]
    fn ball_of_set_edge_cases() {
        let g = path(5);
        assert!(ball_of_set(&g, &CellSet::new()).unwrap().is_empty());
        assert_eq!(ball_of_set(&g, &CellSet::from([2])).unwrap(), ball(&g, 2, 1).unwrap());
        assert!(ball_of_set(&g, &CellSet::from([5])).is_err());
    }

    #[test]
    fn khalimsky_opens() {
        let k = FiniteTopology::khalimsky_line(5, true);
        assert_eq!(k.min_open(1), &CellSet::from([0, 1, 2]));
        assert_eq!(k.min_open(2), &CellSet::from([2]));
        assert!(!k.is_open(&CellSet::from([1])));
        assert!(k.is_open(&CellSet::from([0, 1, 2])));
        assert!(k.is_open(&CellSet::new()));
        assert!(k.is_open(&(0..5).collect()));
        assert!(FiniteTopology::from_min_open(1, vec![CellSet::from([0, 1]), CellSet::from([1, 0])]).is_ok());
    }

    #[test]
    fn invalid_min_open_tables_are_rejected() {
        // 0's open contains 1, but 1's open contains 2 which is outside.
        let bad = vec![CellSet::from([0, 1]), CellSet::from([1, 2]), CellSet::from([2])];
        assert!(FiniteTopology::from_min_open(1, bad).is_err());
        assert!(FiniteTopology::from_min_open(1, vec![CellSet::from([1]), CellSet::from([1])]).is_err());
    }

    #[test]
    fn continuity_basics() {
        let k = FiniteTopology::khalimsky_line(5, true);
        let id: Vec<usize> = (0..5).collect();
        assert!(k.continuity(&k, &id).unwrap().continuous);
        assert!(k.continuity(&k, &[3; 5]).unwrap().continuous);
        // Sending the open point 1 to the closed point 2 while its
        // neighbour 0 stays at 0 is not continuous.
        let c = k.continuity(&k, &[0, 2, 2, 3, 4]).unwrap();
        assert_eq!(c.witness, Some((1, 0)));
        assert!(matches!(k.continuity(&k, &[0, 1]), Err(Error::NonTotal { .. })));
    }

    #[test]
    fn hausdorff_subspaces() {
        let k = FiniteTopology::khalimsky_line(5, true);
        assert!(k.is_hausdorff_on(&CellSet::from([0, 2, 4])));
        assert!(!k.is_hausdorff_on(&CellSet::from([0, 1])));
        assert!(k.is_hausdorff_on(&CellSet::from([1, 3])));
    }

    #[test]
    fn from_ids_sorts_and_reads_topology() {
        let g =
            CellularGraph::from_ids(2, &["b", "a", "c"], &[("a", "b")], Some(&[("b", vec!["a", "b", "c"])])).unwrap();
        assert_eq!(g.ids(), &["a", "b", "c"]);
        assert!(g.related(1, 0));
        assert_eq!(g.topology().min_open(1), &CellSet::from([0, 1, 2]));
        assert!(CellularGraph::from_ids(1, &["a", "a"], &[], None).is_err());
    }
}
