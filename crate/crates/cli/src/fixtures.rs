//! The fixture corpus shipped in `fixtures/`. Each file is the canonical
//! JSON of the structure built here.

use anyhow::Result;
use cellstruct::generators::*;
use cellstruct::maps::{DTCellMap, LevelMapFamily, QuotientMap};
use cellstruct::sequence::quotient;

use crate::format::{Map, Structure};

pub const NAMES: [&str; 8] = [
    "cantor",
    "dt_shift",
    "dyadic",
    "dyadic_khalimsky",
    "ex_fcont",
    "full_image",
    "khalimsky",
    "sine",
];

pub fn build(name: &str) -> Result<Structure> {
    Ok(match name {
        "cantor" => Structure::new(cantor(4)?),
        "dyadic" => Structure::new(dyadic_interval(5, Topology::Discrete)?),
        "dyadic_khalimsky" => Structure::new(dyadic_interval(4, Topology::Khalimsky)?),
        "khalimsky" => Structure::new(khalimsky_interval(4, 2)?),
        "dt_shift" => {
            let s = dyadic_interval(5, Topology::Discrete)?;
            let id = DTCellMap::identity(&s);
            let shift = DTCellMap::level_shift(&s);
            Structure::new(s)
                .with_map("identity", Map::Dt(id))
                .with_map("shift", Map::Dt(shift))
        }
        "ex_fcont" => {
            let depth = 4;
            let g = ex_fcont_g(depth, 2, Topology::Khalimsky)?;
            let h = ex_fcont_h(depth, 2, Topology::Khalimsky)?;
            let jump = ex_fcont_jump(&g, &h, depth)?;
            let straight = ex_fcont_straight(&g, &h, depth)?;
            let (qg, qh) = (quotient(&g, depth)?, quotient(&h, depth)?);
            let identity = QuotientMap::new(&qg, &qh, (0..qg.len()).collect())?;
            let row: Vec<usize> = g.level(1).cells().map(cross_horizontal).collect();
            let horizontal = LevelMapFamily::new(&g, &h, vec![row; depth])?;
            Structure::new(g)
                .with_target(h)
                .with_map("horizontal", Map::Family(horizontal))
                .with_map("identity", Map::Quotient(identity))
                .with_map("jump", Map::Weak(jump))
                .with_map("straight", Map::Weak(straight))
        }
        "full_image" => {
            let (g, h, f) = full_image_map(4, Topology::Discrete)?;
            Structure::new(g).with_target(h).with_map("full_image", Map::Gcell(f))
        }
        "sine" => {
            let h = sine_curve_h(4, 3, Topology::Khalimsky)?;
            let q = quotient(&h, 4)?;
            let identity = QuotientMap::identity(&q);
            Structure::new(h).with_map("identity", Map::Quotient(identity))
        }
        other => anyhow::bail!("unknown fixture `{other}`"),
    })
}
