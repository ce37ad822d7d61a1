//! Inverse sequences of cellular graphs and everything computed from their
//! depth-`D` truncations: threads, the natural relation, quotients, A-sets,
//! the cell-structure axioms and the Cauchy/convergence predicates.
//!
//! Every verdict that depends on the inverse limit is taken at an explicit
//! depth `D`. The depth-`D` relation only gives necessary-condition evidence
//! about the limit relation: transitivity at depth `D` neither implies nor is
//! implied by transitivity in the limit.

mod axioms;
mod cauchy;
mod quotient;
mod threads;

pub use axioms::{check_cell_structure, uniform_contracts, AxiomReport, ContractionFailure, UniformLevel};
pub(crate) use cauchy::{close, search_limit};
pub use cauchy::{converges_to, find_limit, is_cauchy, is_close, CauchyFailure, CauchyVerdict, CellSequence};
pub use quotient::{a_set, quotient, QuotientSpace};
pub use threads::{enumerate_threads, thread_relation, Thread, ThreadSpace, TransitivityReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_table, Cell, CellularGraph, Continuity};

/// Consecutive bonding maps; entry `n - 1` is `g_n^{n+1}: G_{n+1} → G_n`.
/// Longer composites are always derived, so `g_n^l = g_n^m ∘ g_m^l` holds by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BondingFamily {
    maps: Vec<Vec<usize>>,
}

impl BondingFamily {
    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseSequence {
    levels: Vec<CellularGraph>,
    bonding: BondingFamily,
}

impl InverseSequence {
    /// `bonding[n - 1]` maps the cells of level `n + 1` to cells of level `n`.
    pub fn new(mut levels: Vec<CellularGraph>, bonding: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::DepthOutOfRange { depth: 1, levels: 0 });
        }
        if bonding.len() + 1 != levels.len() {
            return Err(Error::BondingShape {
                level: bonding.len().min(levels.len()),
            });
        }
        for (n, map) in bonding.iter().enumerate() {
            check_table(map, levels[n + 1].len(), levels[n].len()).map_err(|e| match e {
                Error::NonTotal { .. } => Error::BondingShape { level: n + 1 },
                other => other,
            })?;
        }
        for (n, level) in levels.iter_mut().enumerate() {
            level.set_level(n + 1);
        }
        Ok(InverseSequence {
            levels,
            bonding: BondingFamily { maps: bonding },
        })
    }

    /// Same cellular graph at every level, identity bondings.
    pub fn constant(graph: CellularGraph, levels: usize) -> Result<Self> {
        let n = graph.len();
        InverseSequence::new(vec![graph; levels], vec![(0..n).collect(); levels.saturating_sub(1)])
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Level `n`, counting from 1.
    pub fn level(&self, n: usize) -> &CellularGraph {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[CellularGraph] {
        &self.levels
    }

    pub fn bonding(&self) -> &BondingFamily {
        &self.bonding
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n >= 1 && n <= self.levels.len() {
            Ok(())
        } else {
            Err(Error::LevelOutOfRange {
                level: n,
                levels: self.levels.len(),
            })
        }
    }

    pub fn check_depth(&self, depth: usize) -> Result<()> {
        if depth >= 1 && depth <= self.levels.len() {
            Ok(())
        } else {
            Err(Error::DepthOutOfRange {
                depth,
                levels: self.levels.len(),
            })
        }
    }

    pub fn check_cell(&self, c: Cell) -> Result<()> {
        self.check_level(c.level)?;
        self.level(c.level).check_cell(c.index)
    }

    /// Resolves a cell by level and id.
    pub fn cell(&self, level: usize, id: &str) -> Result<Cell> {
        self.check_level(level)?;
        Ok(Cell::new(level, self.level(level).index_of(id)?))
    }

    pub fn cell_id(&self, c: Cell) -> &str {
        self.level(c.level).id(c.index)
    }

    /// `g_n^{n+1}(x)` for `x ∈ G_{n+1}`.
    pub fn bond(&self, n: usize, x: usize) -> usize {
        self.bonding.maps[n - 1][x]
    }

    /// Cells of `G_{n+1}` mapped onto `y ∈ G_n`, ascending.
    pub fn preimages(&self, n: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.bonding.maps[n - 1]
            .iter()
            .enumerate()
            .filter(move |&(_, &t)| t == y)
            .map(|(x, _)| x)
    }

    /// `g_to^{c.level}(c)`; requires `to <= c.level`.
    pub fn project(&self, c: Cell, to: usize) -> usize {
        debug_assert!(to >= 1 && to <= c.level);
        (to..c.level).rev().fold(c.index, |x, n| self.bonding.maps[n - 1][x])
    }

    /// Returns a copy with `g_n^{n+1}(x)` redirected to `target`.
    pub fn redirect(&self, n: usize, x: usize, target: usize) -> Result<Self> {
        self.check_level(n + 1)?;
        self.level(n + 1).check_cell(x)?;
        self.level(n).check_cell(target)?;
        let mut maps = self.bonding.maps.clone();
        maps[n - 1][x] = target;
        InverseSequence::new(self.levels.clone(), maps)
    }

    /// Returns a copy with every level's topology replaced.
    pub fn map_levels<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&CellularGraph) -> Result<CellularGraph>,
    {
        let levels = self.levels.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        InverseSequence::new(levels, self.bonding.maps.clone())
    }
}

/// `g_i^j` as a table on `G_j`; `g_i^i` is the identity.
pub fn compose_bonding(s: &InverseSequence, i: usize, j: usize) -> Result<Vec<usize>> {
    if i > j {
        return Err(Error::LevelOrder { from: i, to: j });
    }
    s.check_level(i)?;
    s.check_level(j)?;
    Ok(s.level(j).cells().map(|x| s.project(Cell::new(j, x), i)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BondingReport {
    /// Domain level `n + 1` of `g_n^{n+1}`.
    pub from_level: usize,
    pub total: bool,
    /// First pair of `r_{n+1}` whose image leaves `r_n`.
    pub edge_witness: Option<(usize, usize)>,
    pub continuity: Continuity,
}

impl BondingReport {
    pub fn passes(&self) -> bool {
        self.total && self.edge_witness.is_none() && self.continuity.continuous
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub bondings: Vec<BondingReport>,
}

impl SequenceReport {
    pub fn passes(&self) -> bool {
        self.bondings.iter().all(BondingReport::passes)
    }
}

/// Checks totality, edge preservation and continuity of every bonding map.
pub fn validate_sequence(s: &InverseSequence) -> SequenceReport {
    let bondings = (1..s.num_levels())
        .map(|n| {
            let map = &s.bonding.maps[n - 1];
            let upper = s.level(n + 1);
            let lower = s.level(n);
            let edge_witness = upper.relation().pairs().find(|&(x, y)| !lower.related(map[x], map[y]));
            let continuity = upper
                .topology()
                .continuity(lower.topology(), map)
                .unwrap_or(Continuity {
                    continuous: false,
                    witness: None,
                });
            BondingReport {
                from_level: n + 1,
                total: map.len() == upper.len(),
                edge_witness,
                continuity,
            }
        })
        .collect();
    SequenceReport { bondings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dyadic_interval, Topology};
    use crate::graph::{FiniteTopology, Relation};

    #[test]
    fn dyadic_validates() {
        let s = dyadic_interval(6, Topology::Discrete).unwrap();
        assert!(validate_sequence(&s).passes());
    }

    #[test]
    fn redirected_bonding_breaks_edges() {
        let s = dyadic_interval(3, Topology::Discrete).unwrap();
        // Level-3 cell 1 normally lies over 0; sending it to 3 splits the
        // edge (0, 1) of r_3 into the non-edge (0, 3) of r_2.
        let bad = s.redirect(2, 1, 3).unwrap();
        let report = validate_sequence(&bad);
        assert!(!report.passes());
        assert_eq!(report.bondings[1].edge_witness, Some((0, 1)));
        assert!(report.bondings[0].edge_witness.is_none());
    }

    #[test]
    fn identity_bondings_validate() {
        let g = CellularGraph::new(
            1,
            vec!["a".into(), "b".into(), "c".into()],
            Relation::closure(3, [(0, 1)]).unwrap(),
            FiniteTopology::khalimsky_line(3, true),
        )
        .unwrap();
        let s = InverseSequence::constant(g, 4).unwrap();
        assert!(validate_sequence(&s).passes());
    }

    #[test]
    fn compose_examples() {
        let s = dyadic_interval(4, Topology::Discrete).unwrap();
        assert_eq!(compose_bonding(&s, 2, 2).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(compose_bonding(&s, 2, 3).unwrap()[5], 2);
        let g13 = compose_bonding(&s, 1, 3).unwrap();
        let g12 = compose_bonding(&s, 1, 2).unwrap();
        let g23 = compose_bonding(&s, 2, 3).unwrap();
        for x in 0..8 {
            assert_eq!(g13[x], g12[g23[x]]);
        }
        assert!(matches!(compose_bonding(&s, 3, 2), Err(Error::LevelOrder { .. })));
        assert!(compose_bonding(&s, 1, 5).is_err());
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let g = CellularGraph::new(1, vec!["a".into()], Relation::diagonal(1), FiniteTopology::discrete(1)).unwrap();
        assert!(InverseSequence::new(vec![g.clone(), g.clone()], vec![]).is_err());
        assert!(InverseSequence::new(vec![g.clone(), g.clone()], vec![vec![1]]).is_err());
        assert!(InverseSequence::new(vec![g.clone(), g], vec![vec![]]).is_err());
    }
}
