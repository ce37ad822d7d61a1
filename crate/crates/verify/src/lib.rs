//! Brute-force oracles. Each recomputes a library result straight from its
//! definition, sharing no code with the implementation beyond the data
//! types.

use std::collections::BTreeSet;

use cellstruct::graph::{CellSet, CellularGraph};
use cellstruct::sequence::{InverseSequence, QuotientSpace, Thread};

/// `B(u, k·r)` by `k` rounds of neighbor expansion over an adjacency matrix.
pub fn ball(g: &CellularGraph, u: usize, k: usize) -> CellSet {
    let n = g.len();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in g.relation().pairs() {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut reached = vec![false; n];
    reached[u] = true;
    for _ in 0..k {
        let prev = reached.clone();
        for a in 0..n {
            for b in 0..n {
                if prev[a] && adj[a][b] {
                    reached[b] = true;
                }
            }
        }
    }
    (0..n).filter(|&v| reached[v]).collect()
}

/// Depth-`depth` threads by filtering the full product of the levels.
/// Mixed radix with the last level fastest gives lexicographic order.
pub fn threads(s: &InverseSequence, depth: usize) -> Vec<Thread> {
    let sizes: Vec<usize> = (1..=depth).map(|n| s.level(n).len()).collect();
    let total: usize = sizes.iter().product();
    let mut out = Vec::new();
    for code in 0..total {
        let mut coords = vec![0; depth];
        let mut rest = code;
        for n in (0..depth).rev() {
            coords[n] = rest % sizes[n];
            rest /= sizes[n];
        }
        if (1..depth).all(|n| s.bond(n, coords[n]) == coords[n - 1]) {
            out.push(Thread(coords));
        }
    }
    out
}

pub fn subsets(n: usize) -> impl Iterator<Item = CellSet> {
    (0u64..1 << n).map(move |bits| (0..n).filter(|&c| bits >> c & 1 == 1).collect())
}

pub fn is_open(g: &CellularGraph, set: &CellSet) -> bool {
    set.iter().all(|&u| g.topology().min_open(u).is_subset(set))
}

/// Classes of threads `z` through `U` at level `i` for which some deeper
/// level `j` separates `z_j` from every thread through the outer ring of `U`.
pub fn a_set(
    s: &InverseSequence,
    q: &QuotientSpace,
    threads: &[Thread],
    depth: usize,
    i: usize,
    u: &CellSet,
) -> BTreeSet<usize> {
    let ring: CellSet = s
        .level(i)
        .relation()
        .pairs()
        .filter(|(a, b)| u.contains(a) && !u.contains(b))
        .map(|(_, b)| b)
        .collect();
    let mut out = BTreeSet::new();
    for (zi, z) in threads.iter().enumerate() {
        if !u.contains(&z.at(i)) {
            continue;
        }
        let separated = (i + 1..=depth).any(|j| {
            threads
                .iter()
                .filter(|w| ring.contains(&w.at(i)))
                .all(|w| !s.level(j).related(z.at(j), w.at(j)))
        });
        if separated {
            out.insert(q.class_of(zi));
        }
    }
    out
}

/// Threads are related when their coordinates are related at every level.
pub fn threads_related(s: &InverseSequence, a: &Thread, b: &Thread) -> bool {
    (1..=a.depth()).all(|n| s.level(n).related(a.at(n), b.at(n)))
}
