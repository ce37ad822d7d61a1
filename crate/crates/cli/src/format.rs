//! The JSON structure file: a source sequence, an optional target sequence
//! and named maps between them.
//!
//! Canonical form: cells sorted by id, relations written as every directed
//! non-reflexive pair of the closed relation in sorted order, minimal opens
//! only where they differ from `{u}`, maps keyed and sorted by cell or
//! thread ids. `save(load(x))` is a fixed point.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, ensure, Context, Result};
use cellstruct::graph::{Cell, CellSet, CellularGraph};
use cellstruct::maps::{DTCellMap, GCellMap, LevelMapFamily, QuotientMap, WeakGCellMap};
use cellstruct::sequence::{quotient, InverseSequence, QuotientSpace, Thread, ThreadSpace};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub version: u32,
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub bondings: Vec<BondingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub bondings: Vec<BondingSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub cells: Vec<String>,
    #[serde(default)]
    pub relation: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_open: Option<BTreeMap<String, Vec<String>>>,
}

/// `g_{from_level - 1}^{from_level}` as `cell → image`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondingSpec {
    pub from_level: usize,
    pub table: BTreeMap<String, String>,
}

/// Threads are written as their coordinate ids, level 1 first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreadPair {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    /// A thread map at depth `depth`; every source thread appears once.
    Weak { depth: usize, table: Vec<ThreadPair> },
    /// `images["i:x"]` lists `f(x)` as `"k:y"` refs; absent cells map to ∅.
    Gcell {
        source_levels: usize,
        target_levels: usize,
        images: BTreeMap<String, Vec<String>>,
    },
    /// `maps[i - 1]` is `f_i: G_i → H_i`.
    Family { maps: Vec<BTreeMap<String, String>> },
    /// `table[i - 1]` sends `G_i` into `H_{profile[i - 1]}`.
    Dt {
        profile: Vec<usize>,
        table: Vec<BTreeMap<String, String>>,
    },
    /// A class map, each class named by one of its threads.
    Quotient { depth: usize, table: Vec<ThreadPair> },
}

impl MapSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            MapSpec::Weak { .. } => "weak",
            MapSpec::Gcell { .. } => "gcell",
            MapSpec::Family { .. } => "family",
            MapSpec::Dt { .. } => "dt",
            MapSpec::Quotient { .. } => "quotient",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Map {
    Weak(WeakGCellMap),
    Gcell(GCellMap),
    Family(LevelMapFamily),
    Dt(DTCellMap),
    Quotient(QuotientMap),
}

impl Map {
    pub fn kind(&self) -> &'static str {
        match self {
            Map::Weak(_) => "weak",
            Map::Gcell(_) => "gcell",
            Map::Family(_) => "family",
            Map::Dt(_) => "dt",
            Map::Quotient(_) => "quotient",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Structure {
    pub source: InverseSequence,
    /// `None` when maps go from the source sequence to itself.
    pub target: Option<InverseSequence>,
    pub maps: BTreeMap<String, Map>,
    /// Messages about normalisation applied while loading.
    pub notices: Vec<String>,
}

impl Structure {
    pub fn new(source: InverseSequence) -> Self {
        Structure {
            source,
            target: None,
            maps: BTreeMap::new(),
            notices: Vec::new(),
        }
    }

    pub fn with_target(mut self, target: InverseSequence) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_map(mut self, name: &str, map: Map) -> Self {
        self.maps.insert(name.to_owned(), map);
        self
    }

    pub fn target(&self) -> &InverseSequence {
        self.target.as_ref().unwrap_or(&self.source)
    }
}

pub fn parse(text: &str) -> Result<Structure> {
    let file: StructureFile = serde_json::from_str(text).context("malformed structure file")?;
    load(&file)
}

pub fn load(file: &StructureFile) -> Result<Structure> {
    ensure!(
        file.version == VERSION,
        "unsupported version {} (expected {VERSION})",
        file.version
    );
    let mut notices = Vec::new();
    let source = build_sequence("source", &file.levels, &file.bondings, &mut notices)?;
    let target = match &file.target {
        Some(t) => Some(build_sequence("target", &t.levels, &t.bondings, &mut notices)?),
        None => None,
    };
    let h = target.as_ref().unwrap_or(&source);
    let mut maps = BTreeMap::new();
    for (name, spec) in &file.maps {
        let map = resolve_map(spec, &source, h).with_context(|| format!("map `{name}`"))?;
        maps.insert(name.clone(), map);
    }
    Ok(Structure {
        source,
        target,
        maps,
        notices,
    })
}

fn build_sequence(
    which: &str,
    levels: &[LevelSpec],
    bondings: &[BondingSpec],
    notices: &mut Vec<String>,
) -> Result<InverseSequence> {
    ensure!(!levels.is_empty(), "{which}: no levels");
    let mut graphs = Vec::with_capacity(levels.len());
    for (i, spec) in levels.iter().enumerate() {
        let n = i + 1;
        let min_open: Option<Vec<(String, Vec<String>)>> = spec
            .min_open
            .as_ref()
            .map(|t| t.iter().map(|(k, v)| (k.clone(), v.clone())).collect());
        let graph = CellularGraph::from_ids(n, &spec.cells, &spec.relation, min_open.as_deref())
            .with_context(|| format!("{which} level {n}"))?;
        let given: BTreeSet<(&str, &str)> = spec
            .relation
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let closed = graph.relation().pairs().filter(|(a, b)| a != b).count();
        if closed > given.len() {
            notices.push(format!(
                "{which} level {n}: closure added {} pair(s)",
                closed - given.len()
            ));
        }
        graphs.push(graph);
    }
    let mut sorted: Vec<&BondingSpec> = bondings.iter().collect();
    sorted.sort_by_key(|b| b.from_level);
    let expected: Vec<usize> = (2..=levels.len()).collect();
    let found: Vec<usize> = sorted.iter().map(|b| b.from_level).collect();
    ensure!(
        found == expected,
        "{which}: bondings must have from_level {expected:?}, found {found:?}"
    );
    let mut tables = Vec::with_capacity(sorted.len());
    for b in sorted {
        let (upper, lower) = (&graphs[b.from_level - 1], &graphs[b.from_level - 2]);
        let mut table = vec![usize::MAX; upper.len()];
        for (x, y) in &b.table {
            let xi = upper
                .index_of(x)
                .with_context(|| format!("{which} bonding from level {}", b.from_level))?;
            table[xi] = lower
                .index_of(y)
                .with_context(|| format!("{which} bonding from level {}", b.from_level))?;
        }
        if let Some(missing) = table.iter().position(|&y| y == usize::MAX) {
            bail!(
                "{which} bonding from level {}: no image for `{}`",
                b.from_level,
                upper.id(missing)
            );
        }
        tables.push(table);
    }
    InverseSequence::new(graphs, tables).with_context(|| format!("{which} sequence"))
}

fn parse_cell_ref(s: &InverseSequence, r: &str) -> Result<Cell> {
    let (level, id) = r
        .split_once(':')
        .ok_or_else(|| anyhow!("cell ref `{r}` is not `level:id`"))?;
    let level: usize = level.parse().with_context(|| format!("cell ref `{r}`"))?;
    s.cell(level, id).with_context(|| format!("cell ref `{r}`"))
}

fn cell_ref(s: &InverseSequence, c: Cell) -> String {
    format!("{}:{}", c.level, s.cell_id(c))
}

fn parse_thread(s: &InverseSequence, space: &ThreadSpace, ids: &[String]) -> Result<usize> {
    ensure!(
        ids.len() == space.depth(),
        "thread {ids:?} does not have {} coordinates",
        space.depth()
    );
    let coords = ids
        .iter()
        .enumerate()
        .map(|(i, id)| s.level(i + 1).index_of(id).map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    space
        .index_of(&Thread(coords))
        .ok_or_else(|| anyhow!("{ids:?} is not a thread"))
}

fn thread_ids(s: &InverseSequence, t: &Thread) -> Vec<String> {
    (1..=t.depth()).map(|i| s.cell_id(t.cell(i)).to_owned()).collect()
}

fn level_table(src: &CellularGraph, dst: &CellularGraph, table: &BTreeMap<String, String>) -> Result<Vec<usize>> {
    let mut out = vec![usize::MAX; src.len()];
    for (x, y) in table {
        out[src.index_of(x)?] = dst.index_of(y)?;
    }
    if let Some(missing) = out.iter().position(|&y| y == usize::MAX) {
        bail!("no image for `{}` at level {}", src.id(missing), src.level());
    }
    Ok(out)
}

fn resolve_map(spec: &MapSpec, g: &InverseSequence, h: &InverseSequence) -> Result<Map> {
    Ok(match spec {
        MapSpec::Weak { depth, table } => {
            let (src, dst) = (ThreadSpace::new(g, *depth)?, ThreadSpace::new(h, *depth)?);
            let mut out = vec![usize::MAX; src.len()];
            for pair in table {
                let a = parse_thread(g, &src, &pair.from)?;
                ensure!(out[a] == usize::MAX, "thread {:?} listed twice", pair.from);
                out[a] = parse_thread(h, &dst, &pair.to)?;
            }
            if let Some(missing) = out.iter().position(|&y| y == usize::MAX) {
                bail!("no image for thread {:?}", thread_ids(g, src.thread(missing)));
            }
            Map::Weak(WeakGCellMap::new(&src, &dst, out)?)
        }
        MapSpec::Gcell {
            source_levels,
            target_levels,
            images,
        } => {
            let mut f = GCellMap::empty(g, h, *source_levels, *target_levels)?;
            for (x, ys) in images {
                let x = parse_cell_ref(g, x)?;
                ensure!(
                    x.level <= *source_levels,
                    "source cell level {} above {source_levels}",
                    x.level
                );
                let mut by_level: BTreeMap<usize, CellSet> = BTreeMap::new();
                for y in ys {
                    let y = parse_cell_ref(h, y)?;
                    ensure!(
                        y.level <= *target_levels,
                        "target cell level {} above {target_levels}",
                        y.level
                    );
                    by_level.entry(y.level).or_default().insert(y.index);
                }
                for (k, set) in by_level {
                    f.set(x, k, set);
                }
            }
            Map::Gcell(f)
        }
        MapSpec::Family { maps } => {
            let tables = maps
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    g.check_level(i + 1)?;
                    h.check_level(i + 1)?;
                    level_table(g.level(i + 1), h.level(i + 1), t)
                })
                .collect::<Result<Vec<_>>>()?;
            Map::Family(LevelMapFamily::new(g, h, tables)?)
        }
        MapSpec::Dt { profile, table } => {
            ensure!(profile.len() == table.len(), "profile and table lengths differ");
            let tables = table
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    g.check_level(i + 1)?;
                    h.check_level(profile[i])?;
                    level_table(g.level(i + 1), h.level(profile[i]), t)
                })
                .collect::<Result<Vec<_>>>()?;
            Map::Dt(DTCellMap::new(g, h, profile.clone(), tables)?)
        }
        MapSpec::Quotient { depth, table } => {
            let (qg, qh) = (quotient(g, *depth)?, quotient(h, *depth)?);
            let mut out = vec![usize::MAX; qg.len()];
            for pair in table {
                let a = qg.class_of(parse_thread(g, qg.threads(), &pair.from)?);
                let b = qh.class_of(parse_thread(h, qh.threads(), &pair.to)?);
                ensure!(
                    out[a] == usize::MAX || out[a] == b,
                    "class of {:?} is sent to two classes",
                    pair.from
                );
                out[a] = b;
            }
            if let Some(missing) = out.iter().position(|&y| y == usize::MAX) {
                bail!(
                    "no image for the class of {:?}",
                    thread_ids(g, qg.threads().thread(qg.representative(missing)))
                );
            }
            Map::Quotient(QuotientMap::new(&qg, &qh, out)?)
        }
    })
}

fn level_spec(g: &CellularGraph) -> LevelSpec {
    let relation = g
        .relation()
        .pairs()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (g.id(a).to_owned(), g.id(b).to_owned()))
        .collect();
    let top = g.topology();
    let min_open = (!top.is_discrete()).then(|| {
        g.cells()
            .filter(|&u| top.min_open(u).len() > 1)
            .map(|u| {
                (
                    g.id(u).to_owned(),
                    top.min_open(u).iter().map(|&v| g.id(v).to_owned()).collect(),
                )
            })
            .collect()
    });
    LevelSpec {
        cells: g.ids().to_vec(),
        relation,
        min_open,
    }
}

fn sequence_spec(s: &InverseSequence) -> SequenceSpec {
    SequenceSpec {
        levels: s.levels().iter().map(level_spec).collect(),
        bondings: (1..s.num_levels())
            .map(|n| BondingSpec {
                from_level: n + 1,
                table: s
                    .level(n + 1)
                    .cells()
                    .map(|x| (s.level(n + 1).id(x).to_owned(), s.level(n).id(s.bond(n, x)).to_owned()))
                    .collect(),
            })
            .collect(),
    }
}

fn thread_pairs(
    g: &InverseSequence,
    h: &InverseSequence,
    src: &ThreadSpace,
    dst: &ThreadSpace,
    table: &[usize],
) -> Vec<ThreadPair> {
    let mut pairs: Vec<ThreadPair> = table
        .iter()
        .enumerate()
        .map(|(a, &b)| ThreadPair {
            from: thread_ids(g, src.thread(a)),
            to: thread_ids(h, dst.thread(b)),
        })
        .collect();
    pairs.sort();
    pairs
}

fn class_pairs(
    g: &InverseSequence,
    h: &InverseSequence,
    qg: &QuotientSpace,
    qh: &QuotientSpace,
    map: &QuotientMap,
) -> Vec<ThreadPair> {
    let mut pairs: Vec<ThreadPair> = (0..qg.len())
        .map(|c| ThreadPair {
            from: thread_ids(g, qg.threads().thread(qg.representative(c))),
            to: thread_ids(h, qh.threads().thread(qh.representative(map.apply(c)))),
        })
        .collect();
    pairs.sort();
    pairs
}

fn level_map(src: &CellularGraph, dst: &CellularGraph, table: &[usize]) -> BTreeMap<String, String> {
    table
        .iter()
        .enumerate()
        .map(|(x, &y)| (src.id(x).to_owned(), dst.id(y).to_owned()))
        .collect()
}

fn map_spec(map: &Map, g: &InverseSequence, h: &InverseSequence) -> Result<MapSpec> {
    Ok(match map {
        Map::Weak(f) => {
            let (src, dst) = (ThreadSpace::new(g, f.depth)?, ThreadSpace::new(h, f.depth)?);
            MapSpec::Weak {
                depth: f.depth,
                table: thread_pairs(g, h, &src, &dst, &f.table),
            }
        }
        Map::Gcell(f) => MapSpec::Gcell {
            source_levels: f.source_levels(),
            target_levels: f.target_levels(),
            images: f
                .cells(g)
                .filter(|&x| !f.is_empty_at(x))
                .map(|x| (cell_ref(g, x), f.image(x).into_iter().map(|y| cell_ref(h, y)).collect()))
                .collect(),
        },
        Map::Family(f) => MapSpec::Family {
            maps: f
                .maps
                .iter()
                .enumerate()
                .map(|(i, t)| level_map(g.level(i + 1), h.level(i + 1), t))
                .collect(),
        },
        Map::Dt(f) => MapSpec::Dt {
            profile: f.profile.clone(),
            table: f
                .table
                .iter()
                .enumerate()
                .map(|(i, t)| level_map(g.level(i + 1), h.level(f.profile[i]), t))
                .collect(),
        },
        Map::Quotient(f) => {
            let (qg, qh) = (quotient(g, f.depth)?, quotient(h, f.depth)?);
            MapSpec::Quotient {
                depth: f.depth,
                table: class_pairs(g, h, &qg, &qh, f),
            }
        }
    })
}

pub fn to_file(s: &Structure) -> Result<StructureFile> {
    let src = sequence_spec(&s.source);
    let maps = s
        .maps
        .iter()
        .map(|(name, m)| Ok((name.clone(), map_spec(m, &s.source, s.target())?)))
        .collect::<Result<_>>()?;
    Ok(StructureFile {
        version: VERSION,
        levels: src.levels,
        bondings: src.bondings,
        target: s.target.as_ref().map(sequence_spec),
        maps,
    })
}

pub fn canonical_json(s: &Structure) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&to_file(s)?)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cellstruct::generators::{dyadic_interval, Topology};

    #[test]
    fn closure_notice_counts_added_pairs() {
        let text = r#"{"version": 1, "levels": [{"cells": ["a", "b", "c"], "relation": [["a", "b"], ["c", "b"]]}]}"#;
        let s = parse(text).unwrap();
        assert_eq!(s.notices, vec!["source level 1: closure added 2 pair(s)"]);
        let again = parse(&canonical_json(&s).unwrap()).unwrap();
        assert!(again.notices.is_empty());
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let s = Structure::new(dyadic_interval(3, Topology::Khalimsky).unwrap());
        let once = canonical_json(&s).unwrap();
        let twice = canonical_json(&parse(&once).unwrap()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let text = r#"{"version": 1, "levels": [{"cells": ["a"], "relation": [["a", "z"]]}]}"#;
        let err = format!("{:#}", parse(text).unwrap_err());
        assert!(err.contains("unknown cell `z`"), "{err}");
        let text = r#"{"version": 1, "levels": [{"cells": ["a"]}, {"cells": ["b"]}], "bondings": [{"from_level": 2, "table": {}}]}"#;
        let err = format!("{:#}", parse(text).unwrap_err());
        assert!(err.contains("no image for `b`"), "{err}");
    }
}
