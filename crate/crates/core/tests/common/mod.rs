#![allow(dead_code)]

use cellstruct::generators::*;
use cellstruct::graph::{CellSet, CellularGraph, FiniteTopology, Relation};
use cellstruct::sequence::InverseSequence;

pub fn corpus() -> Vec<(String, InverseSequence)> {
    let mut out = Vec::new();
    for l in 1..=4 {
        out.push((format!("dyadic-{l}"), dyadic_interval(l, Topology::Discrete).unwrap()));
        out.push((
            format!("dyadic-k-{l}"),
            dyadic_interval(l, Topology::Khalimsky).unwrap(),
        ));
    }
    out.push(("cantor-3".into(), cantor(3).unwrap()));
    out.push(("khalimsky-3-2".into(), khalimsky_interval(3, 2).unwrap()));
    for t in [Topology::Discrete, Topology::Khalimsky] {
        out.push((format!("fcont-g-{t:?}"), ex_fcont_g(2, 2, t).unwrap()));
        out.push((format!("fcont-h-{t:?}"), ex_fcont_h(2, 2, t).unwrap()));
        out.push((format!("sine-{t:?}"), sine_curve_h(3, 3, t).unwrap()));
    }
    let (g, h, _) = full_image_map(3, Topology::Discrete).unwrap();
    out.push(("full-g".into(), g));
    out.push(("full-h".into(), h));
    out
}

/// Reflexive closure of a set of directed edges, made transitive: the
/// minimal-open table of the finite topology it generates.
pub fn preorder_table(n: usize, edges: &[(usize, usize)]) -> Vec<CellSet> {
    let mut reach: Vec<CellSet> = (0..n).map(|u| CellSet::from([u])).collect();
    for &(a, b) in edges {
        reach[a % n].insert(b % n);
    }
    loop {
        let mut changed = false;
        for u in 0..n {
            let extra: CellSet = reach[u].iter().flat_map(|&v| reach[v].clone()).collect();
            if !extra.is_subset(&reach[u]) {
                reach[u].extend(extra);
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// A discrete-topology sequence with the given sizes, bondings and edge
/// proposals; an edge at level `n + 1` is kept only when its endpoints map
/// to related cells.
pub fn random_sequence(sizes: &[usize], bonds: &[Vec<usize>], edges: &[Vec<(usize, usize)>]) -> InverseSequence {
    let mut levels: Vec<CellularGraph> = Vec::new();
    let mut bonding = Vec::new();
    for (n, &size) in sizes.iter().enumerate() {
        let mut pairs = Vec::new();
        for &(a, b) in &edges[n] {
            let (a, b) = (a % size, b % size);
            let keep = n == 0 || {
                let f = |x: usize| bonds[n - 1][x] % sizes[n - 1];
                levels[n - 1].related(f(a), f(b))
            };
            if keep {
                pairs.push((a, b));
            }
        }
        if n > 0 {
            bonding.push((0..size).map(|x| bonds[n - 1][x] % sizes[n - 1]).collect());
        }
        let ids = (0..size).map(|k| format!("{k:02}")).collect();
        let rel = Relation::closure(size, pairs).unwrap();
        levels.push(CellularGraph::new(n + 1, ids, rel, FiniteTopology::discrete(size)).unwrap());
    }
    InverseSequence::new(levels, bonding).unwrap()
}

pub mod strategy {
    use proptest::prelude::*;

    /// Level sizes, bonding tables and edge proposals per level.
    pub type Parts = (Vec<usize>, Vec<Vec<usize>>, Vec<Vec<(usize, usize)>>);

    /// (sizes, bondings, edge proposals) for 2 to `max_levels` levels of 1
    /// to `max_size` cells.
    pub fn sequence_parts(max_levels: usize, max_size: usize) -> impl Strategy<Value = Parts> {
        (2..=max_levels)
            .prop_flat_map(move |l| proptest::collection::vec(1..=max_size, l))
            .prop_flat_map(move |sizes| {
                let l = sizes.len();
                let bonds = proptest::collection::vec(proptest::collection::vec(0..64usize, max_size), l - 1);
                let edges =
                    proptest::collection::vec(proptest::collection::vec((0..64usize, 0..64usize), 0..2 * max_size), l);
                (Just(sizes), bonds, edges)
            })
    }
}
