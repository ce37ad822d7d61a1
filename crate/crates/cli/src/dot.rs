//! Graphviz rendering: one cluster per level with its relation edges,
//! bonding arrows between consecutive levels, and dashed arrows for cell
//! maps.

use std::fmt::Write;

use cellstruct::graph::Cell;
use cellstruct::sequence::InverseSequence;

use crate::format::{Map, Structure};

fn node(prefix: &str, s: &InverseSequence, c: Cell) -> String {
    format!("\"{prefix}{}:{}\"", c.level, s.cell_id(c))
}

fn sequence(out: &mut String, prefix: &str, name: &str, s: &InverseSequence) {
    for n in 1..=s.num_levels() {
        let g = s.level(n);
        let _ = writeln!(out, "  subgraph \"cluster_{prefix}{n}\" {{");
        let _ = writeln!(out, "    label=\"{name} level {n}\";");
        for x in g.cells() {
            let shape = if g.topology().min_open(x).len() > 1 {
                "box"
            } else {
                "ellipse"
            };
            let _ = writeln!(
                out,
                "    {} [label=\"{}\", shape={shape}];",
                node(prefix, s, Cell::new(n, x)),
                g.id(x)
            );
        }
        for (a, b) in g.relation().pairs().filter(|(a, b)| a < b) {
            let _ = writeln!(
                out,
                "    {} -> {} [dir=none];",
                node(prefix, s, Cell::new(n, a)),
                node(prefix, s, Cell::new(n, b))
            );
        }
        out.push_str("  }\n");
    }
    for n in 1..s.num_levels() {
        for x in s.level(n + 1).cells() {
            let _ = writeln!(
                out,
                "  {} -> {} [color=gray];",
                node(prefix, s, Cell::new(n + 1, x)),
                node(prefix, s, Cell::new(n, s.bond(n, x)))
            );
        }
    }
}

pub fn render(st: &Structure) -> String {
    let mut out = String::from("digraph cellstruct {\n  compound=true;\n");
    sequence(&mut out, "", "G", &st.source);
    let (h, hp) = match &st.target {
        Some(t) => {
            sequence(&mut out, "t", "H", t);
            (t, "t")
        }
        None => (&st.source, ""),
    };
    let g = &st.source;
    for (name, map) in &st.maps {
        let arrows: Vec<(Cell, Cell)> = match map {
            Map::Gcell(f) => f
                .cells(g)
                .flat_map(|x| f.image(x).into_iter().map(move |y| (x, y)))
                .collect(),
            Map::Family(f) => f
                .maps
                .iter()
                .enumerate()
                .flat_map(|(i, t)| {
                    t.iter()
                        .enumerate()
                        .map(move |(x, &y)| (Cell::new(i + 1, x), Cell::new(i + 1, y)))
                })
                .collect(),
            Map::Dt(f) => g
                .levels()
                .iter()
                .take(f.table.len())
                .flat_map(|l| l.cells().map(move |x| Cell::new(l.level(), x)))
                .map(|x| (x, f.apply(x)))
                .collect(),
            Map::Weak(_) | Map::Quotient(_) => Vec::new(),
        };
        for (x, y) in arrows {
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, color=blue, label=\"{name}\"];",
                node("", g, x),
                node(hp, h, y)
            );
        }
    }
    out.push_str("}\n");
    out
}
