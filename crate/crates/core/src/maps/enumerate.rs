use super::GCellMap;
use crate::error::Result;
use crate::graph::{Cell, CellSet};
use crate::sequence::InverseSequence;

/// Per-cell images `f(x) ∩ H_k, k = 1..=levels`, that are nested and whose
/// level pieces are simplices (condition (3) with `x = y`).
fn candidate_rows(h: &InverseSequence, levels: usize) -> Vec<Vec<CellSet>> {
    let mut rows: Vec<Vec<CellSet>> = vec![Vec::new()];
    for k in 1..=levels {
        let level = h.level(k);
        let n = level.len();
        let subsets: Vec<CellSet> = (0u64..1 << n)
            .map(|bits| (0..n).filter(|&c| bits >> c & 1 == 1).collect::<CellSet>())
            .filter(|s| level.relation().is_simplex(s))
            .collect();
        let mut next = Vec::new();
        for row in &rows {
            for s in &subsets {
                let nested = s
                    .iter()
                    .all(|&c| (1..k).all(|i| row[i - 1].contains(&h.project(Cell::new(k, c), i))));
                if nested {
                    let mut r = row.clone();
                    r.push(s.clone());
                    next.push(r);
                }
            }
        }
        rows = next;
    }
    rows
}

/// Calls `visit` on every map over the first `levels` levels of `g` and `h`
/// satisfying conditions (1)-(3), in a fixed order. Returns the number of
/// maps visited.
pub fn enumerate_gcell_maps<F>(g: &InverseSequence, h: &InverseSequence, levels: usize, mut visit: F) -> Result<usize>
where
    F: FnMut(&GCellMap),
{
    g.check_depth(levels)?;
    h.check_depth(levels)?;
    let rows = candidate_rows(h, levels);
    let cells: Vec<Cell> = (1..=levels)
        .flat_map(|i| g.level(i).cells().map(move |x| Cell::new(i, x)))
        .collect();
    let mut map = GCellMap::empty(g, h, levels, levels)?;
    let mut chosen: Vec<usize> = Vec::with_capacity(cells.len());
    let mut count = 0;

    fn fits(
        g: &InverseSequence,
        h: &InverseSequence,
        map: &GCellMap,
        cells: &[Cell],
        done: usize,
        row: &[CellSet],
    ) -> bool {
        let x = cells[done];
        // Compatibility with every projection, all of which come earlier.
        for i in 1..x.level {
            let below = Cell::new(i, g.project(x, i));
            for (k, set) in row.iter().enumerate() {
                let lower = map.at(below, k + 1);
                if !lower.is_empty() && (set.is_empty() || !set.is_subset(lower)) {
                    return false;
                }
            }
        }
        // Edges to earlier related cells of the same level.
        for &y in g.level(x.level).relation().neighbors(x.index) {
            let yc = Cell::new(x.level, y);
            if cells[..done].contains(&yc) {
                for (k, set) in row.iter().enumerate() {
                    let rel = h.level(k + 1).relation();
                    let other = map.at(yc, k + 1);
                    if set.iter().any(|&a| other.iter().any(|&b| !rel.contains(a, b))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    loop {
        let depth = chosen.len();
        if depth == cells.len() {
            visit(&map);
            count += 1;
        } else {
            chosen.push(usize::MAX);
        }
        // Advance the last position to its next fitting row, backtracking
        // when a position is exhausted.
        loop {
            let Some(pos) = chosen.len().checked_sub(1) else {
                return Ok(count);
            };
            let start = chosen[pos].wrapping_add(1);
            let next = (start..rows.len()).find(|&r| fits(g, h, &map, &cells, pos, &rows[r]));
            match next {
                Some(r) => {
                    chosen[pos] = r;
                    for (k, set) in rows[r].iter().enumerate() {
                        map.set(cells[pos], k + 1, set.clone());
                    }
                    break;
                }
                None => {
                    for k in 1..=levels {
                        map.set(cells[pos], k, CellSet::new());
                    }
                    chosen.pop();
                }
            }
        }
    }
}
