use serde::Serialize;

use super::GCellMap;
use crate::error::{Error, Result};
use crate::graph::{check_table, Cell, CellSet};
use crate::sequence::InverseSequence;

/// Level maps `f_i: G_i → H_i`; `maps[i - 1]` is `f_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelMapFamily {
    pub maps: Vec<Vec<usize>>,
}

impl LevelMapFamily {
    pub fn new(g: &InverseSequence, h: &InverseSequence, maps: Vec<Vec<usize>>) -> Result<Self> {
        let fam = LevelMapFamily { maps };
        fam.check_shape(g, h)?;
        Ok(fam)
    }

    /// `f_i = id` for sequences with identical level sizes.
    pub fn identity(g: &InverseSequence) -> Self {
        LevelMapFamily {
            maps: g.levels().iter().map(|l| l.cells().collect()).collect(),
        }
    }

    pub fn levels(&self) -> usize {
        self.maps.len()
    }

    fn check_shape(&self, g: &InverseSequence, h: &InverseSequence) -> Result<()> {
        g.check_depth(self.maps.len())?;
        h.check_depth(self.maps.len())?;
        for (i, map) in self.maps.iter().enumerate() {
            check_table(map, g.level(i + 1).len(), h.level(i + 1).len())?;
        }
        Ok(())
    }
}

/// `f(x) = ⋃_{m ≤ i} h_m^i(f_i(x))` for `x ∈ G_i`, after checking
/// `f_i ∘ g_i^{i+1} = h_i^{i+1} ∘ f_{i+1}` and edge preservation.
pub fn family_to_gcell(fam: &LevelMapFamily, g: &InverseSequence, h: &InverseSequence) -> Result<GCellMap> {
    fam.check_shape(g, h)?;
    let levels = fam.levels();
    for i in 1..levels {
        for x in g.level(i + 1).cells() {
            if fam.maps[i - 1][g.bond(i, x)] != h.bond(i, fam.maps[i][x]) {
                return Err(Error::NonCommuting { level: i, cell: x });
            }
        }
    }
    for i in 1..=levels {
        let f = &fam.maps[i - 1];
        if let Some((x, y)) = g
            .level(i)
            .relation()
            .pairs()
            .find(|&(x, y)| !h.level(i).related(f[x], f[y]))
        {
            return Err(Error::FamilyEdge { level: i, x, y });
        }
    }
    GCellMap::from_fn(g, h, levels, levels, |x, k| {
        if k > x.level {
            CellSet::new()
        } else {
            CellSet::from([h.project(Cell::new(x.level, fam.maps[x.level - 1][x.index]), k)])
        }
    })
}
