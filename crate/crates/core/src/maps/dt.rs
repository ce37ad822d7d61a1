use serde::Serialize;

use super::WeakGCellMap;
use crate::error::{Error, Result};
use crate::graph::Cell;
use crate::sequence::{
    check_cell_structure, close, is_cauchy, search_limit, CellSequence, InverseSequence, ThreadSpace,
};

/// A level-graded single-valued map `⋃ G_i → ⋃ H_i`: `table[i - 1][x]` is
/// the image of `x ∈ G_i`, a cell of level `profile[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DTCellMap {
    pub profile: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

impl DTCellMap {
    pub fn new(g: &InverseSequence, h: &InverseSequence, profile: Vec<usize>, table: Vec<Vec<usize>>) -> Result<Self> {
        let map = DTCellMap { profile, table };
        map.check(g, h)?;
        Ok(map)
    }

    /// `f(u) = u` between sequences with the same level sizes.
    pub fn identity(g: &InverseSequence) -> Self {
        DTCellMap {
            profile: (1..=g.num_levels()).collect(),
            table: g.levels().iter().map(|l| l.cells().collect()).collect(),
        }
    }

    /// `f(u) = g_{n-1}^n(u)` at level `n - 1`, and `f(u) = u` on level 1.
    pub fn level_shift(g: &InverseSequence) -> Self {
        let n = g.num_levels();
        let mut profile = vec![1];
        let mut table = vec![g.level(1).cells().collect()];
        for level in 2..=n {
            profile.push(level - 1);
            table.push(g.level(level).cells().map(|x| g.bond(level - 1, x)).collect());
        }
        DTCellMap { profile, table }
    }

    pub fn apply(&self, x: Cell) -> Cell {
        Cell::new(self.profile[x.level - 1], self.table[x.level - 1][x.index])
    }

    fn check(&self, g: &InverseSequence, h: &InverseSequence) -> Result<()> {
        if self.profile.len() != self.table.len() {
            return Err(Error::InvalidProfile(format!(
                "{} profile entries for {} source levels",
                self.profile.len(),
                self.table.len()
            )));
        }
        g.check_depth(self.table.len())?;
        if let Some(w) = self.profile.windows(2).find(|w| w[1] < w[0]) {
            return Err(Error::InvalidProfile(format!(
                "profile decreases from {} to {}",
                w[0], w[1]
            )));
        }
        if self.profile.len() > 1 && self.profile.last() <= self.profile.first() {
            return Err(Error::InvalidProfile("profile is constant".into()));
        }
        for (i, row) in self.table.iter().enumerate() {
            h.check_level(self.profile[i])?;
            crate::graph::check_table(row, g.level(i + 1).len(), h.level(self.profile[i]).len())?;
        }
        Ok(())
    }
}

/// First pair of close source cells with non-close images.
pub fn close_preservation_witness(f: &DTCellMap, g: &InverseSequence, h: &InverseSequence) -> Option<(Cell, Cell)> {
    let cells: Vec<Cell> = (1..=f.table.len())
        .flat_map(|i| g.level(i).cells().map(move |x| Cell::new(i, x)))
        .collect();
    cells.iter().enumerate().find_map(|(n, &a)| {
        cells[n + 1..]
            .iter()
            .find(|&&b| close(g, a, b) && !close(h, f.apply(a), f.apply(b)))
            .map(|&b| (a, b))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DtInduced {
    pub map: WeakGCellMap,
    /// Target 3-ball axiom at depth `D`, which the weak property relies on.
    pub target_three_ball: bool,
}

/// `f̄(x̄) = lim f(x_n)` at depth `D`. Image entries above level `D` are
/// dropped; the threshold `N` is the least one after which image levels
/// strictly increase.
pub fn dt_induce_weak(f: &DTCellMap, g: &InverseSequence, h: &InverseSequence, depth: usize) -> Result<DtInduced> {
    f.check(g, h)?;
    if let Some((a, b)) = close_preservation_witness(f, g, h) {
        return Err(Error::NotClosePreserving(format!(
            "{}@{} and {}@{} are close, their images are not",
            g.cell_id(a),
            a.level,
            g.cell_id(b),
            b.level
        )));
    }
    if f.table.len() < depth {
        return Err(Error::DepthOutOfRange {
            depth,
            levels: f.table.len(),
        });
    }
    let src = ThreadSpace::new(g, depth)?;
    let dst = ThreadSpace::new(h, depth)?;
    let mut table = Vec::with_capacity(src.len());
    for t in src.threads() {
        let entries: Vec<Cell> = (1..=depth)
            .map(|n| f.apply(t.cell(n)))
            .filter(|c| c.level <= depth)
            .collect();
        let declared_n = (1..entries.len())
            .rev()
            .find(|&p| entries[p].level <= entries[p - 1].level)
            .unwrap_or(0);
        let seq = CellSequence::new(entries, declared_n)
            .map_err(|_| Error::NotCauchy("no image entries at or below the depth".into()))?;
        let verdict = is_cauchy(h, &seq)?;
        if let Some(failure) = verdict.failure {
            return Err(Error::NotCauchy(format!(
                "image of thread {:?}: {failure:?}",
                t.coords()
            )));
        }
        let limit = search_limit(h, &seq, depth).ok_or(Error::NoLimit { depth })?;
        table.push(dst.index_of(&limit).expect("limit is a thread"));
    }
    Ok(DtInduced {
        map: WeakGCellMap::new(&src, &dst, table)?,
        target_three_ball: check_cell_structure(h, depth)?.three_ball,
    })
}
