//! Deterministic generators for standard structures: the dyadic interval,
//! the Cantor set, a Khalimsky interval, the cross and folded-interval examples used in
//! the continuity counterexamples, and the full-image g-cell map.
//!
//! Continuous spaces are sampled on dyadic grids of step `2^-m`; grid points
//! are numbered `0..=2^m`. Ids are zero padded within a level so that id
//! order agrees with numeric order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CellSet, CellularGraph, FiniteTopology, Relation};
use crate::maps::{GCellMap, WeakGCellMap};
use crate::sequence::{InverseSequence, Thread, ThreadSpace};

const MAX_LEVELS: usize = 16;
const MAX_RESOLUTION: u32 = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    #[default]
    Discrete,
    /// Alternating open/closed points. On sequences whose bonding maps would
    /// not be continuous for the plain Khalimsky topology, level `n + 1` gets
    /// the coarsest refinement making the bonding map continuous.
    Khalimsky,
}

fn pad(i: usize, max: usize) -> String {
    let width = max.to_string().len();
    format!("{i:0width$}")
}

fn check_levels(levels: usize) -> Result<()> {
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::InvalidParams(format!(
            "levels must be between 1 and {MAX_LEVELS}, got {levels}"
        )));
    }
    Ok(())
}

fn check_resolution(m: u32, min: u32) -> Result<usize> {
    if m < min || m > MAX_RESOLUTION {
        return Err(Error::InvalidParams(format!(
            "resolution must be between {min} and {MAX_RESOLUTION}, got {m}"
        )));
    }
    Ok(1 << m)
}

fn path_relation(len: usize) -> Relation {
    Relation::closure(len, (1..len).map(|i| (i - 1, i))).expect("indices in range")
}

/// Refines each level's topology so the bonding maps become continuous:
/// `U'_{n+1}(x) = U_{n+1}(x) ∩ g^{-1}(U'_n(g(x)))`.
fn pull_back_join(levels: &mut [CellularGraph], bonding: &[Vec<usize>]) -> Result<()> {
    for n in 1..levels.len() {
        let map = &bonding[n - 1];
        let lower = levels[n - 1].topology().clone();
        let upper = levels[n].topology();
        let min_open = (0..upper.len())
            .map(|x| {
                let target = lower.min_open(map[x]);
                upper
                    .min_open(x)
                    .iter()
                    .copied()
                    .filter(|&y| target.contains(&map[y]))
                    .collect()
            })
            .collect();
        let topology = FiniteTopology::from_min_open(n + 1, min_open)?;
        levels[n] = levels[n].clone().with_topology(topology)?;
    }
    Ok(())
}

/// Level `n` has `2^n` cells `0..2^n` with `|k − k′| ≤ 1` adjacency, and
/// `g(k) = ⌊k/2⌋`.
pub fn dyadic_interval(levels: usize, topology: Topology) -> Result<InverseSequence> {
    check_levels(levels)?;
    let mut graphs = Vec::with_capacity(levels);
    let mut bonding = Vec::with_capacity(levels - 1);
    for n in 1..=levels {
        let len = 1usize << n;
        let top = match topology {
            Topology::Discrete => FiniteTopology::discrete(len),
            Topology::Khalimsky => FiniteTopology::khalimsky_line(len, true),
        };
        let ids = (0..len).map(|k| pad(k, len - 1)).collect();
        graphs.push(CellularGraph::new(n, ids, path_relation(len), top)?);
        if n > 1 {
            bonding.push((0..len).map(|k| k / 2).collect());
        }
    }
    if topology == Topology::Khalimsky {
        pull_back_join(&mut graphs, &bonding)?;
    }
    InverseSequence::new(graphs, bonding)
}

fn binary_levels(levels: usize, relation: impl Fn(usize) -> Relation) -> Result<InverseSequence> {
    check_levels(levels)?;
    let mut graphs = Vec::with_capacity(levels);
    let mut bonding = Vec::with_capacity(levels - 1);
    for n in 1..=levels {
        let len = 1usize << n;
        let ids = (0..len).map(|k| format!("{k:0n$b}")).collect();
        graphs.push(CellularGraph::new(
            n,
            ids,
            relation(len),
            FiniteTopology::discrete(len),
        )?);
        if n > 1 {
            bonding.push((0..len).map(|k| k / 2).collect());
        }
    }
    InverseSequence::new(graphs, bonding)
}

/// Binary strings of length `n` with the diagonal relation; bonding drops the
/// last digit.
pub fn cantor(levels: usize) -> Result<InverseSequence> {
    binary_levels(levels, Relation::diagonal)
}

/// The grid `0..=2^m` at every level with neighbour adjacency, the
/// Khalimsky topology (odd points open) and identity bondings.
pub fn khalimsky_interval(levels: usize, m: u32) -> Result<InverseSequence> {
    check_levels(levels)?;
    let n = check_resolution(m, 1)?;
    let g = CellularGraph::new(
        1,
        (0..=n).map(|k| pad(k, n)).collect(),
        path_relation(n + 1),
        FiniteTopology::khalimsky_line(n + 1, true),
    )?;
    InverseSequence::constant(g, levels)
}

/// `G_n = [0, 1]` on the grid, diagonal relation, identity bondings.
pub fn ex_fcont_g(levels: usize, m: u32, topology: Topology) -> Result<InverseSequence> {
    check_levels(levels)?;
    let n = check_resolution(m, 2)?;
    let top = match topology {
        Topology::Discrete => FiniteTopology::discrete(n + 1),
        Topology::Khalimsky => FiniteTopology::khalimsky_line(n + 1, true),
    };
    let g = CellularGraph::new(
        1,
        (0..=n).map(|k| format!("x{}", pad(k, n))).collect(),
        Relation::diagonal(n + 1),
        top,
    )?;
    InverseSequence::constant(g, levels)
}

/// Index of `(i/2^m, 0)` in an `ex_fcont_h` level.
pub fn cross_horizontal(i: usize) -> usize {
    i
}

/// Index of `(1/2, j/2^m)` for `j ≥ 1` in an `ex_fcont_h` level.
pub fn cross_vertical(m: u32, j: usize) -> usize {
    (1usize << m) + j
}

/// `H_n = [0,1]×{0} ∪ {1/2}×[0,1]` on the grid: cells `h{i}` = `(i/2^m, 0)`
/// and `v{j}` = `(1/2, j/2^m)` for `j ≥ 1`. Every vertical cell is related
/// to `(1/2, 0)`. Bondings are identities. The Khalimsky topology lives on
/// the cross-shaped grid graph with odd points open.
pub fn ex_fcont_h(levels: usize, m: u32, topology: Topology) -> Result<InverseSequence> {
    check_levels(levels)?;
    let n = check_resolution(m, 2)?;
    let mid = n / 2;
    let mut ids: Vec<String> = (0..=n).map(|i| format!("h{}", pad(i, n))).collect();
    ids.extend((1..=n).map(|j| format!("v{}", pad(j, n))));
    let len = ids.len();
    let v = |j: usize| cross_vertical(m, j);
    let relation = Relation::closure(len, (1..=n).map(|j| (v(j), mid)))?;
    let top = match topology {
        Topology::Discrete => FiniteTopology::discrete(len),
        Topology::Khalimsky => {
            let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
            edges.push((mid, v(1)));
            edges.extend((2..=n).map(|j| (v(j - 1), v(j))));
            let grid = Relation::closure(len, edges)?;
            let open: Vec<bool> = (0..=n).map(|i| i % 2 == 1).chain((1..=n).map(|j| j % 2 == 1)).collect();
            FiniteTopology::khalimsky(1, &grid, &open)?
        }
    };
    let g = CellularGraph::new(1, ids, relation, top)?;
    InverseSequence::constant(g, levels)
}

fn constant_thread(index: usize, depth: usize) -> Thread {
    Thread(vec![index; depth])
}

/// `f(x) = (x, 0)` for `x ≠ 1/2` and `f(1/2) = (1/2, 1)`, as a thread map
/// between the two `ex_fcont` sequences at depth `D`.
pub fn ex_fcont_jump(g: &InverseSequence, h: &InverseSequence, depth: usize) -> Result<WeakGCellMap> {
    let n = g.level(1).len() - 1;
    let m = n.trailing_zeros();
    ex_fcont_map(g, h, depth, |x| if x == n / 2 { cross_vertical(m, n) } else { x })
}

/// `f(x) = (x, 0)` for every `x`.
pub fn ex_fcont_straight(g: &InverseSequence, h: &InverseSequence, depth: usize) -> Result<WeakGCellMap> {
    ex_fcont_map(g, h, depth, cross_horizontal)
}

fn ex_fcont_map(
    g: &InverseSequence,
    h: &InverseSequence,
    depth: usize,
    cell: impl Fn(usize) -> usize,
) -> Result<WeakGCellMap> {
    let src = ThreadSpace::new(g, depth)?;
    let dst = ThreadSpace::new(h, depth)?;
    WeakGCellMap::from_fn(&src, &dst, |t| constant_thread(cell(t.at(1)), depth))
}

/// The piecewise bonding map on grid indices `0..=2^m`:
/// `4x` on `[0, 1/4]`, `3/2 − 2x` on `[1/4, 1/2]`, `x` on `[1/2, 1]`.
pub fn sine_bond(m: u32, k: usize) -> usize {
    let n = 1usize << m;
    if 4 * k <= n {
        4 * k
    } else if 2 * k <= n {
        3 * n / 2 - 2 * k
    } else {
        k
    }
}

/// `H_n = [0, 1]` on the grid with the folding bonding map of
/// [`sine_bond`] and every point of `[1/2, 1]` related to `1/2`.
pub fn sine_curve_h(levels: usize, m: u32, topology: Topology) -> Result<InverseSequence> {
    check_levels(levels)?;
    let n = check_resolution(m, 2)?;
    let ids: Vec<String> = (0..=n).map(|k| format!("y{}", pad(k, n))).collect();
    let relation = Relation::closure(n + 1, (n / 2..=n).map(|k| (k, n / 2)))?;
    let top = match topology {
        Topology::Discrete => FiniteTopology::discrete(n + 1),
        Topology::Khalimsky => FiniteTopology::khalimsky_line(n + 1, true),
    };
    let mut graphs: Vec<CellularGraph> = (1..=levels)
        .map(|l| CellularGraph::new(l, ids.clone(), relation.clone(), top.clone()))
        .collect::<Result<_>>()?;
    let bonding: Vec<Vec<usize>> = vec![(0..=n).map(|k| sine_bond(m, k)).collect(); levels - 1];
    if topology == Topology::Khalimsky {
        pull_back_join(&mut graphs, &bonding)?;
    }
    InverseSequence::new(graphs, bonding)
}

/// `G` = dyadic interval, `H` = binary strings with complete relations, and
/// `f(g) = H_1 ∪ … ∪ H_i` for `g ∈ G_i`.
pub fn full_image_map(levels: usize, topology: Topology) -> Result<(InverseSequence, InverseSequence, GCellMap)> {
    let g = dyadic_interval(levels, topology)?;
    let h = binary_levels(levels, Relation::complete)?;
    let f = GCellMap::from_fn(&g, &h, levels, levels, |x, k| {
        if k <= x.level {
            h.level(k).cells().collect()
        } else {
            CellSet::new()
        }
    })?;
    Ok((g, h, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorName {
    DyadicInterval,
    Cantor,
    ExFcontG,
    ExFcontH,
    SineCurveH,
    KhalimskyInterval,
    FullImageMap,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 7] = [
        GeneratorName::DyadicInterval,
        GeneratorName::Cantor,
        GeneratorName::ExFcontG,
        GeneratorName::ExFcontH,
        GeneratorName::SineCurveH,
        GeneratorName::KhalimskyInterval,
        GeneratorName::FullImageMap,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: GeneratorName,
    pub levels: usize,
    /// Grid exponent `m` (step `2^-m`) for grid-based generators.
    pub resolution: u32,
    pub topology: Topology,
}

#[derive(Clone, Debug)]
pub enum Generated {
    Sequence(InverseSequence),
    Map {
        source: InverseSequence,
        target: InverseSequence,
        map: GCellMap,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let (l, m, t) = (spec.levels, spec.resolution, spec.topology);
    Ok(match spec.name {
        GeneratorName::DyadicInterval => Generated::Sequence(dyadic_interval(l, t)?),
        GeneratorName::Cantor => Generated::Sequence(cantor(l)?),
        GeneratorName::ExFcontG => Generated::Sequence(ex_fcont_g(l, m, t)?),
        GeneratorName::ExFcontH => Generated::Sequence(ex_fcont_h(l, m, t)?),
        GeneratorName::SineCurveH => Generated::Sequence(sine_curve_h(l, m, t)?),
        GeneratorName::KhalimskyInterval => Generated::Sequence(khalimsky_interval(l, m)?),
        GeneratorName::FullImageMap => {
            let (source, target, map) = full_image_map(l, t)?;
            Generated::Map { source, target, map }
        }
    })
}

/// The two continuity counterexample maps on the cross (grid step 1/4,
/// two levels, Khalimsky topology, depth 2) and the full-image map on three
/// levels.
#[derive(Clone, Debug)]
pub struct CounterexampleMaps {
    pub cross_source: InverseSequence,
    pub cross_target: InverseSequence,
    pub depth: usize,
    pub jump: WeakGCellMap,
    pub straight: WeakGCellMap,
    pub full_image_source: InverseSequence,
    pub full_image_target: InverseSequence,
    pub full_image: GCellMap,
}

pub fn counterexample_maps() -> Result<CounterexampleMaps> {
    let depth = 2;
    let g = ex_fcont_g(2, 2, Topology::Khalimsky)?;
    let h = ex_fcont_h(2, 2, Topology::Khalimsky)?;
    let jump = ex_fcont_jump(&g, &h, depth)?;
    let straight = ex_fcont_straight(&g, &h, depth)?;
    let (fg, fh, full) = full_image_map(3, Topology::Discrete)?;
    Ok(CounterexampleMaps {
        cross_source: g,
        cross_target: h,
        depth,
        jump,
        straight,
        full_image_source: fg,
        full_image_target: fh,
        full_image: full,
    })
}
