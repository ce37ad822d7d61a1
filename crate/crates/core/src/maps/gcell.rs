use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cell, CellSet};
use crate::sequence::{close, enumerate_threads, InverseSequence, Thread};

/// A set-valued map `⋃ G_i → ⋃ H_k`, stored as `f(x) ∩ H_k` for source
/// levels `1..=source_levels` and target levels `1..=target_levels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GCellMap {
    source_levels: usize,
    target_levels: usize,
    // images[i - 1][x][k - 1] = f(x) ∩ H_k for x ∈ G_i
    images: Vec<Vec<Vec<CellSet>>>,
}

impl GCellMap {
    /// The map with every image empty, over the first `source_levels` levels
    /// of `g` and the first `target_levels` levels of `h`.
    pub fn empty(g: &InverseSequence, h: &InverseSequence, source_levels: usize, target_levels: usize) -> Result<Self> {
        g.check_depth(source_levels)?;
        h.check_depth(target_levels)?;
        let images = (1..=source_levels)
            .map(|i| vec![vec![CellSet::new(); target_levels]; g.level(i).len()])
            .collect();
        Ok(GCellMap {
            source_levels,
            target_levels,
            images,
        })
    }

    /// Builds the map from `f(x) ∩ H_k` for every source cell and target level.
    pub fn from_fn<F>(
        g: &InverseSequence,
        h: &InverseSequence,
        source_levels: usize,
        target_levels: usize,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(Cell, usize) -> CellSet,
    {
        let mut map = GCellMap::empty(g, h, source_levels, target_levels)?;
        for i in 1..=source_levels {
            for x in g.level(i).cells() {
                for k in 1..=target_levels {
                    let set = f(Cell::new(i, x), k);
                    h.level(k).check_set(&set)?;
                    map.images[i - 1][x][k - 1] = set;
                }
            }
        }
        Ok(map)
    }

    pub fn source_levels(&self) -> usize {
        self.source_levels
    }

    pub fn target_levels(&self) -> usize {
        self.target_levels
    }

    /// `f(x) ∩ H_k`.
    pub fn at(&self, x: Cell, k: usize) -> &CellSet {
        &self.images[x.level - 1][x.index][k - 1]
    }

    pub fn set(&mut self, x: Cell, k: usize, set: CellSet) {
        self.images[x.level - 1][x.index][k - 1] = set;
    }

    /// `f(x)` as a list of target cells, by level then index.
    pub fn image(&self, x: Cell) -> Vec<Cell> {
        (1..=self.target_levels)
            .flat_map(|k| self.at(x, k).iter().map(move |&c| Cell::new(k, c)))
            .collect()
    }

    pub fn is_empty_at(&self, x: Cell) -> bool {
        self.images[x.level - 1][x.index].iter().all(CellSet::is_empty)
    }

    /// Source cells in level order.
    pub fn cells<'a>(&self, g: &'a InverseSequence) -> impl Iterator<Item = Cell> + 'a {
        let levels = self.source_levels;
        (1..=levels).flat_map(move |i| g.level(i).cells().map(move |x| Cell::new(i, x)))
    }

    pub(crate) fn check(&self, g: &InverseSequence, h: &InverseSequence) -> Result<()> {
        g.check_depth(self.source_levels)?;
        h.check_depth(self.target_levels)?;
        for i in 1..=self.source_levels {
            if self.images[i - 1].len() != g.level(i).len() {
                return Err(Error::BondingShape { level: i });
            }
            for row in &self.images[i - 1] {
                for (k, set) in row.iter().enumerate() {
                    h.level(k + 1).check_set(set)?;
                }
            }
        }
        Ok(())
    }
}

/// First violation of one of the four conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum GCellViolation {
    /// (1): `cell ∈ f(x) ∩ H_j` but `h_i^j(cell) ∉ f(x) ∩ H_i`.
    Nesting { x: Cell, i: usize, j: usize, cell: usize },
    /// (2): `f(g_i^j(x)) ∩ H_k ≠ ∅` but `f(x) ∩ H_k` is empty (`cell` is
    /// `None`) or contains `cell ∉ f(g_i^j(x))`.
    Compatibility {
        x: Cell,
        i: usize,
        k: usize,
        cell: Option<usize>,
    },
    /// (3): `(x, y) ∈ r_i`, `a ∈ f(x) ∩ H_k`, `b ∈ f(y) ∩ H_k`, `(a, b) ∉ s_k`.
    Edge {
        x: Cell,
        y: Cell,
        k: usize,
        a: usize,
        b: usize,
    },
    /// (4): no `i ≤ D` with `f(x_i) ∩ H_k` nonempty and Hausdorff.
    Limit { thread: Thread, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GCellReport {
    pub depth: usize,
    pub nesting: Option<GCellViolation>,
    pub compatibility: Option<GCellViolation>,
    pub edge: Option<GCellViolation>,
    pub limit: Option<GCellViolation>,
}

impl GCellReport {
    pub fn conditions_1_to_3(&self) -> bool {
        self.nesting.is_none() && self.compatibility.is_none() && self.edge.is_none()
    }

    pub fn passes(&self) -> bool {
        self.conditions_1_to_3() && self.limit.is_none()
    }
}

pub fn check_nesting(f: &GCellMap, h: &InverseSequence) -> Option<GCellViolation> {
    let g_levels = f.images.len();
    for i_src in 1..=g_levels {
        for x in 0..f.images[i_src - 1].len() {
            let xc = Cell::new(i_src, x);
            for j in 1..=f.target_levels {
                for &cell in f.at(xc, j) {
                    for i in 1..j {
                        if !f.at(xc, i).contains(&h.project(Cell::new(j, cell), i)) {
                            return Some(GCellViolation::Nesting { x: xc, i, j, cell });
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn check_compatibility(f: &GCellMap, g: &InverseSequence) -> Option<GCellViolation> {
    for j in 1..=f.source_levels {
        for x in g.level(j).cells() {
            let xc = Cell::new(j, x);
            for i in 1..=j {
                let below = Cell::new(i, g.project(xc, i));
                for k in 1..=f.target_levels {
                    let lower = f.at(below, k);
                    if lower.is_empty() {
                        continue;
                    }
                    let upper = f.at(xc, k);
                    if upper.is_empty() {
                        return Some(GCellViolation::Compatibility {
                            x: xc,
                            i,
                            k,
                            cell: None,
                        });
                    }
                    if let Some(&c) = upper.iter().find(|c| !lower.contains(c)) {
                        return Some(GCellViolation::Compatibility {
                            x: xc,
                            i,
                            k,
                            cell: Some(c),
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn check_edges(f: &GCellMap, g: &InverseSequence, h: &InverseSequence) -> Option<GCellViolation> {
    for i in 1..=f.source_levels {
        for (x, y) in g.level(i).relation().pairs() {
            let (xc, yc) = (Cell::new(i, x), Cell::new(i, y));
            for k in 1..=f.target_levels {
                let rel = h.level(k).relation();
                for &a in f.at(xc, k) {
                    if let Some(&b) = f.at(yc, k).iter().find(|&&b| !rel.contains(a, b)) {
                        return Some(GCellViolation::Edge { x: xc, y: yc, k, a, b });
                    }
                }
            }
        }
    }
    None
}

/// Levels `i ≤ D` at which `f(x_i) ∩ H_k` is nonempty and Hausdorff.
pub(crate) fn admissible_levels(f: &GCellMap, h: &InverseSequence, t: &Thread, k: usize) -> Vec<usize> {
    (1..=t.depth().min(f.source_levels))
        .filter(|&i| {
            let set = f.at(t.cell(i), k);
            !set.is_empty() && h.level(k).topology().is_hausdorff_on(set)
        })
        .collect()
}

/// Condition (4) for every depth-`D` thread and every `k ≤ min(D, L_H)`.
pub fn check_limit_condition(
    f: &GCellMap,
    g: &InverseSequence,
    h: &InverseSequence,
    depth: usize,
) -> Result<Option<GCellViolation>> {
    let threads = enumerate_threads(g, depth)?;
    for t in threads {
        for k in 1..=depth.min(f.target_levels) {
            if admissible_levels(f, h, &t, k).is_empty() {
                return Ok(Some(GCellViolation::Limit { thread: t, k }));
            }
        }
    }
    Ok(None)
}

pub fn check_gcell_map(f: &GCellMap, g: &InverseSequence, h: &InverseSequence, depth: usize) -> Result<GCellReport> {
    f.check(g, h)?;
    Ok(GCellReport {
        depth,
        nesting: check_nesting(f, h),
        compatibility: check_compatibility(f, g),
        edge: check_edges(f, g, h),
        limit: check_limit_condition(f, g, h, depth)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
}

/// An open `W ⊆ H_k` (`target_level`, `open`) and a point of the minimal open
/// of `point`'s base cell that leaves the preimage set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemicontinuityWitness {
    pub target_level: usize,
    pub open: CellSet,
    /// A cell in the preimage set of `open`.
    pub inside: Cell,
    /// A cell of the minimal open of `inside` outside the preimage set.
    pub outside: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemicontinuityReport {
    pub side: Side,
    pub holds: bool,
    pub witness: Option<SemicontinuityWitness>,
}

/// Upper: `{x : f(x) ⊆ W}` is open for every open `W ⊆ H_k`; lower:
/// `{x : f(x) ∩ W ≠ ∅}` is open. Opens of `⋃ G_i` are the sets whose trace
/// on every level is open, so it suffices to test minimal opens of points.
pub fn check_semicontinuity(
    f: &GCellMap,
    g: &InverseSequence,
    h: &InverseSequence,
    side: Side,
) -> Result<SemicontinuityReport> {
    f.check(g, h)?;
    let witness = match side {
        Side::Upper => upper_witness(f, g, h),
        Side::Lower => lower_witness(f, g, h),
    };
    Ok(SemicontinuityReport {
        side,
        holds: witness.is_none(),
        witness,
    })
}

fn upper_witness(f: &GCellMap, g: &InverseSequence, h: &InverseSequence) -> Option<SemicontinuityWitness> {
    for x in f.cells(g) {
        let levels: Vec<usize> = (1..=f.target_levels).filter(|&k| !f.at(x, k).is_empty()).collect();
        // f(x) ⊆ W ⊆ H_k needs the whole image inside one level; the least
        // such W is the open hull of f(x) (or ∅ when f(x) is empty).
        let (k, w) = match levels.as_slice() {
            [] => (1, CellSet::new()),
            [k] => (*k, h.level(*k).topology().hull(f.at(x, *k))),
            _ => continue,
        };
        for &y in g.level(x.level).topology().min_open(x.index) {
            let yc = Cell::new(x.level, y);
            let inside = (1..=f.target_levels).all(|j| {
                if j == k {
                    f.at(yc, j).is_subset(&w)
                } else {
                    f.at(yc, j).is_empty()
                }
            });
            if !inside {
                return Some(SemicontinuityWitness {
                    target_level: k,
                    open: w,
                    inside: x,
                    outside: yc,
                });
            }
        }
    }
    None
}

fn lower_witness(f: &GCellMap, g: &InverseSequence, h: &InverseSequence) -> Option<SemicontinuityWitness> {
    for x in f.cells(g) {
        for k in 1..=f.target_levels {
            for &b in f.at(x, k) {
                let w = h.level(k).topology().min_open(b);
                for &y in g.level(x.level).topology().min_open(x.index) {
                    let yc = Cell::new(x.level, y);
                    if f.at(yc, k).is_disjoint(w) {
                        return Some(SemicontinuityWitness {
                            target_level: k,
                            open: w.clone(),
                            inside: x,
                            outside: yc,
                        });
                    }
                }
            }
        }
    }
    None
}

/// A pair `x_i`, `y_j` of thread coordinates and `a ∈ f(x_i)`, `b ∈ f(y_j)`
/// that are not close.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosenessWitness {
    pub x: Cell,
    pub y: Cell,
    pub a: Cell,
    pub b: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosenessReport {
    pub depth: usize,
    /// Same-level related coordinates.
    pub case_1a: Option<ClosenessWitness>,
    /// Close coordinates at any two levels.
    pub case_1b: Option<ClosenessWitness>,
}

impl ClosenessReport {
    pub fn holds(&self) -> bool {
        self.case_1a.is_none() && self.case_1b.is_none()
    }
}

/// Checks that images of close thread coordinates consist of close cells.
/// Cells of `G_i` count as thread coordinates when some depth-`D` thread
/// passes through them.
pub fn check_closeness_preservation(
    f: &GCellMap,
    g: &InverseSequence,
    h: &InverseSequence,
    depth: usize,
) -> Result<ClosenessReport> {
    f.check(g, h)?;
    let levels = depth.min(f.source_levels);
    let threads = enumerate_threads(g, depth)?;
    let mut on_thread: Vec<CellSet> = vec![CellSet::new(); levels];
    for t in &threads {
        for i in 1..=levels {
            on_thread[i - 1].insert(t.at(i));
        }
    }
    let images = |x: Cell| f.image(x);
    let bad = |x: Cell, y: Cell| -> Option<ClosenessWitness> {
        let bs = images(y);
        images(x).into_iter().find_map(|a| {
            bs.iter()
                .find(|&&b| !close(h, a, b))
                .map(|&b| ClosenessWitness { x, y, a, b })
        })
    };

    let mut case_1a = None;
    'outer: for i in 1..=levels {
        for &x in &on_thread[i - 1] {
            for &y in g.level(i).relation().neighbors(x) {
                if on_thread[i - 1].contains(&y) {
                    if let Some(w) = bad(Cell::new(i, x), Cell::new(i, y)) {
                        case_1a = Some(w);
                        break 'outer;
                    }
                }
            }
        }
    }

    let mut case_1b = None;
    'outer_b: for i in 1..=levels {
        for &x in &on_thread[i - 1] {
            for j in 1..=levels {
                for &y in &on_thread[j - 1] {
                    let (xc, yc) = (Cell::new(i, x), Cell::new(j, y));
                    if close(g, xc, yc) {
                        if let Some(w) = bad(xc, yc) {
                            case_1b = Some(w);
                            break 'outer_b;
                        }
                    }
                }
            }
        }
    }
    Ok(ClosenessReport {
        depth,
        case_1a,
        case_1b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{full_image_map, khalimsky_interval};

    #[test]
    fn full_image_map_is_a_gcell_map() {
        let (g, h, f) = full_image_map(3, crate::generators::Topology::Discrete).unwrap();
        let r = check_gcell_map(&f, &g, &h, 3).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(f.image(Cell::new(3, 0)).len(), 2 + 4 + 8);
        for side in [Side::Upper, Side::Lower] {
            assert!(check_semicontinuity(&f, &g, &h, side).unwrap().holds);
        }
    }

    #[test]
    fn broken_nesting_is_reported() {
        let (g, h, mut f) = full_image_map(3, crate::generators::Topology::Discrete).unwrap();
        let x = Cell::new(2, 1);
        f.set(x, 1, CellSet::from([0]));
        let r = check_gcell_map(&f, &g, &h, 3).unwrap();
        assert_eq!(r.nesting, Some(GCellViolation::Nesting { x, i: 1, j: 2, cell: 2 }));
    }

    #[test]
    fn jump_across_a_closed_point_is_not_upper_semicontinuous() {
        // Source and target: Khalimsky line on 5 points (odd points open).
        // f sends the open point 1 to {2} and its closed neighbour 0 to {0}.
        let s = khalimsky_interval(1, 2).unwrap();
        let f = GCellMap::from_fn(&s, &s, 1, 1, |x, _| match x.index {
            0 | 1 => CellSet::from([2 * x.index]),
            i => CellSet::from([i]),
        })
        .unwrap();
        let r = check_semicontinuity(&f, &s, &s, Side::Upper).unwrap();
        let w = r.witness.unwrap();
        assert_eq!((w.inside, w.outside), (Cell::new(1, 1), Cell::new(1, 0)));
        assert_eq!(w.open, CellSet::from([2]));
    }
}
