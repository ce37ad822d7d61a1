use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use cellstruct::generators::{generate, Generated, GeneratorName, GeneratorSpec, Topology};
use cellstruct::graph::{Cell, CellSet};
use cellstruct::maps::*;
use cellstruct::sequence::{
    check_cell_structure, quotient, validate_sequence, InverseSequence, QuotientSpace, Thread, ThreadSpace,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dot;
use crate::format::{self, Map, Structure};

#[derive(Debug, Parser)]
#[command(
    name = "cellstruct",
    version,
    about = "Checks and constructions on inverse sequences of finite cellular graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a sequence and report threads, transitivity and classes.
    Check(CheckArgs),
    /// Run a map operation.
    Map(MapArgs),
    /// Write a structure as canonical JSON or Graphviz DOT.
    Export(ExportArgs),
    /// Generate a standard structure as canonical JSON.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Fail when the depth-D thread relation is not transitive.
    #[arg(long)]
    pub strict_equivalence: bool,
    /// Also check the cell-structure axioms.
    #[arg(long)]
    pub cell_structure: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MapAction {
    CheckWeak,
    CheckGcell,
    Induce,
    Lift,
    Construct,
    Semicontinuity,
    Singleton,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Alpha {
    #[default]
    Deepest,
    StrictlyIncreasing,
    Nondecreasing,
}

impl From<Alpha> for AlphaRule {
    fn from(a: Alpha) -> Self {
        match a {
            Alpha::Deepest => AlphaRule::Deepest,
            Alpha::StrictlyIncreasing => AlphaRule::StrictlyIncreasing,
            Alpha::Nondecreasing => AlphaRule::Nondecreasing,
        }
    }
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(value_enum)]
    pub action: MapAction,
    pub file: PathBuf,
    /// Map name; may be omitted when exactly one map fits the action.
    #[arg(long)]
    pub map: Option<String>,
    /// Defaults to the map's own depth for thread and class maps, else 4.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Alpha::Deepest)]
    pub alpha: Alpha,
    /// Cap on representative choices tried by `lift`.
    #[arg(long, default_value_t = 100_000)]
    pub max_choices: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Generator {
    #[value(name = "dyadic_interval", alias = "dyadic-interval")]
    DyadicInterval,
    #[value(name = "cantor")]
    Cantor,
    #[value(name = "ex_fcont_G", alias = "ex-fcont-g")]
    ExFcontG,
    #[value(name = "ex_fcont_H", alias = "ex-fcont-h")]
    ExFcontH,
    #[value(name = "sine_curve_H", alias = "sine-curve-h")]
    SineCurveH,
    #[value(name = "khalimsky_interval", alias = "khalimsky-interval")]
    KhalimskyInterval,
    #[value(name = "full_image_map", alias = "full-image-map")]
    FullImageMap,
}

impl From<Generator> for GeneratorName {
    fn from(g: Generator) -> Self {
        match g {
            Generator::DyadicInterval => GeneratorName::DyadicInterval,
            Generator::Cantor => GeneratorName::Cantor,
            Generator::ExFcontG => GeneratorName::ExFcontG,
            Generator::ExFcontH => GeneratorName::ExFcontH,
            Generator::SineCurveH => GeneratorName::SineCurveH,
            Generator::KhalimskyInterval => GeneratorName::KhalimskyInterval,
            Generator::FullImageMap => GeneratorName::FullImageMap,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TopologyArg {
    Discrete,
    Khalimsky,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub generator: Generator,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Grid exponent m (step 2^-m).
    #[arg(long, default_value_t = 2)]
    pub resolution: u32,
    #[arg(long, value_enum, default_value_t = TopologyArg::Discrete)]
    pub topology: TopologyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Something that stops a command before it can report: bad input (exit 2)
/// or a failed hypothesis gate (exit 1).
#[derive(Debug)]
pub enum Abort {
    Usage(anyhow::Error),
    Gate(anyhow::Error),
}

impl From<anyhow::Error> for Abort {
    fn from(e: anyhow::Error) -> Self {
        Abort::Usage(e)
    }
}

impl From<cellstruct::Error> for Abort {
    fn from(e: cellstruct::Error) -> Self {
        Abort::Usage(e.into())
    }
}

type Outcome = std::result::Result<bool, Abort>;

/// A finished report: human lines, the JSON form and the verdict.
struct Report {
    lines: Vec<String>,
    json: Value,
    pass: bool,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a, out, err),
        Command::Map(a) => cmd_map(&a, out, err),
        Command::Export(a) => cmd_export(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(Abort::Gate(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_FAIL
        }
        Err(Abort::Usage(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Structure> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    format::parse(&text).with_context(|| format!("{}", path.display()))
}

fn emit(report: Report, json: bool, notices: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if json {
        let mut v = report.json;
        v["notices"] = json!(notices);
        v["pass"] = json!(report.pass);
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)?
        )
        .map_err(anyhow::Error::from)?;
    } else {
        for n in notices {
            writeln!(err, "notice: {n}").map_err(anyhow::Error::from)?;
        }
        for line in &report.lines {
            writeln!(out, "{line}").map_err(anyhow::Error::from)?;
        }
        writeln!(out, "result: {}", if report.pass { "pass" } else { "FAIL" }).map_err(anyhow::Error::from)?;
    }
    Ok(report.pass)
}

fn thread_str(s: &InverseSequence, t: &Thread) -> String {
    (1..=t.depth())
        .map(|i| s.cell_id(t.cell(i)))
        .collect::<Vec<_>>()
        .join("/")
}

fn cell_str(s: &InverseSequence, c: Cell) -> String {
    format!("{}:{}", c.level, s.cell_id(c))
}

fn set_str(s: &InverseSequence, level: usize, set: &CellSet) -> String {
    let ids: Vec<&str> = set.iter().map(|&c| s.level(level).id(c)).collect();
    format!("{{{}}}", ids.join(", "))
}

fn check_depth(s: &InverseSequence, depth: usize) -> anyhow::Result<()> {
    if depth == 0 || depth > s.num_levels() {
        bail!("depth {depth} out of range (sequence has {} levels)", s.num_levels());
    }
    Ok(())
}

fn check_sequence(
    label: &str,
    s: &InverseSequence,
    a: &CheckArgs,
    lines: &mut Vec<String>,
) -> anyhow::Result<(Value, bool)> {
    let depth = a.depth;
    let sizes: Vec<usize> = s.levels().iter().map(|g| g.len()).collect();
    lines.push(format!("{label}: {} levels, sizes {sizes:?}", s.num_levels()));
    let validation = validate_sequence(s);
    for b in &validation.bondings {
        if !b.total {
            lines.push(format!("  bonding from level {}: not total", b.from_level));
        }
        if let Some((x, y)) = b.edge_witness {
            let g = s.level(b.from_level);
            lines.push(format!(
                "  bonding from level {}: edge ({}, {}) is not preserved",
                b.from_level,
                g.id(x),
                g.id(y)
            ));
        }
        if let Some((x, y)) = b.continuity.witness {
            let g = s.level(b.from_level);
            lines.push(format!(
                "  bonding from level {}: not continuous, {} is in U({}) but its image is not",
                b.from_level,
                g.id(y),
                g.id(x)
            ));
        }
    }
    if validation.passes() {
        lines.push("  bondings: total, edge preserving, continuous".into());
    }
    let space = ThreadSpace::new(s, depth)?;
    let tr = space.transitivity();
    lines.push(format!("  threads at depth {depth}: {}", space.len()));
    match tr.witness {
        None => lines.push("  thread relation: transitive".into()),
        Some((x, y, z)) => {
            let [x, y, z] = [x, y, z].map(|t| thread_str(s, space.thread(t)));
            let tag = if a.strict_equivalence { "error" } else { "warning" };
            lines.push(format!(
                "  {tag}: thread relation is not transitive: {x} ~ {y} ~ {z} but {x} !~ {z}"
            ));
            lines.push("  classes are taken under the transitive closure".into());
        }
    }
    let q = quotient(s, depth)?;
    lines.push(format!("  classes: {}", q.len()));
    let mut pass = validation.passes() && (tr.transitive || !a.strict_equivalence);
    let mut axioms_json = Value::Null;
    if a.cell_structure {
        let ax = check_cell_structure(s, depth)?;
        let uniform: Vec<String> = ax
            .uniform_levels
            .iter()
            .map(|u| match u.least_j {
                Some(j) => format!("i={} j={j}", u.level),
                None => format!("i={} none", u.level),
            })
            .collect();
        lines.push(format!(
            "  cell structure: (a) {}, (b) {} [{}], (c) {}, 3-ball {}, discrete levels {}",
            ok(ax.per_thread),
            ok(ax.uniform),
            uniform.join(", "),
            ok(ax.finiteness),
            ok(ax.three_ball),
            ax.discrete_levels
        ));
        if let Some(f) = &ax.per_thread_failure {
            lines.push(format!(
                "  (a) fails on thread {} at level {}: {} leaves the ball",
                thread_str(s, &f.thread),
                f.level,
                s.level(depth).id(f.cell)
            ));
        }
        pass &= ax.passes();
        axioms_json = serde_json::to_value(&ax)?;
    }
    let v = json!({
        "sizes": sizes,
        "validation": validation,
        "threads": space.len(),
        "transitivity": tr,
        "classes": q.len(),
        "cell_structure": axioms_json,
    });
    Ok((v, pass))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let st = load(&a.file)?;
    check_depth(&st.source, a.depth)?;
    if let Some(t) = &st.target {
        check_depth(t, a.depth)?;
    }
    let mut lines = vec![format!("depth {}", a.depth)];
    let (source, mut pass) = check_sequence("source", &st.source, a, &mut lines)?;
    let mut json = json!({"command": "check", "depth": a.depth, "source": source});
    if let Some(t) = &st.target {
        let (target, p) = check_sequence("target", t, a, &mut lines)?;
        json["target"] = target;
        pass &= p;
    }
    emit(Report { lines, json, pass }, a.json, &st.notices, out, err)
}

fn pick_map<'a>(st: &'a Structure, name: Option<&str>, kinds: &[&str]) -> anyhow::Result<(&'a str, &'a Map)> {
    match name {
        Some(n) => {
            let (k, m) = st.maps.get_key_value(n).ok_or_else(|| anyhow!("no map named `{n}`"))?;
            if !kinds.contains(&m.kind()) {
                bail!("map `{n}` is a {} map; this action needs one of {kinds:?}", m.kind());
            }
            Ok((k.as_str(), m))
        }
        None => {
            let fits: Vec<(&String, &Map)> = st.maps.iter().filter(|(_, m)| kinds.contains(&m.kind())).collect();
            match fits.as_slice() {
                [(k, m)] => Ok((k.as_str(), *m)),
                [] => bail!("no map of kind {kinds:?} in the file"),
                _ => bail!("several maps fit; choose one with --map"),
            }
        }
    }
}

fn map_depth(a: &MapArgs, own: Option<usize>) -> anyhow::Result<usize> {
    match (a.depth, own) {
        (Some(d), Some(o)) if d != o => bail!("--depth {d} differs from the map's depth {o}"),
        (Some(d), _) => Ok(d),
        (None, Some(o)) => Ok(o),
        (None, None) => Ok(4),
    }
}

fn gate(e: cellstruct::Error) -> Abort {
    Abort::Gate(e.into())
}

fn as_gcell(m: &Map, g: &InverseSequence, h: &InverseSequence) -> std::result::Result<GCellMap, Abort> {
    match m {
        Map::Gcell(f) => Ok(f.clone()),
        Map::Family(f) => family_to_gcell(f, g, h).map_err(gate),
        _ => unreachable!("filtered by kind"),
    }
}

fn pair_str(space: &ThreadSpace, s: &InverseSequence, w: Option<(usize, usize)>) -> String {
    match w {
        None => "none".into(),
        Some((x, y)) => format!(
            "({}, {})",
            thread_str(s, space.thread(x)),
            thread_str(s, space.thread(y))
        ),
    }
}

fn class_str(q: &QuotientSpace, s: &InverseSequence, c: usize) -> String {
    format!("[{}]", thread_str(s, q.threads().thread(q.representative(c))))
}

fn cmd_map(a: &MapArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let st = load(&a.file)?;
    let (g, h) = (&st.source, st.target());
    let kinds: &[&str] = match a.action {
        MapAction::CheckWeak => &["weak"],
        MapAction::CheckGcell | MapAction::Semicontinuity | MapAction::Singleton => &["gcell", "family"],
        MapAction::Induce => &["gcell", "family", "dt", "weak"],
        MapAction::Lift | MapAction::Construct => &["quotient"],
    };
    let (name, map) = pick_map(&st, a.map.as_deref(), kinds)?;
    let own = match map {
        Map::Weak(f) => Some(f.depth),
        Map::Quotient(f) => Some(f.depth),
        _ => None,
    };
    let depth = map_depth(a, own)?;
    check_depth(g, depth)?;
    check_depth(h, depth)?;
    let mut lines = vec![format!("map `{name}` ({}), depth {depth}", map.kind())];
    let mut json =
        json!({"command": "map", "action": format!("{:?}", a.action), "map": name, "kind": map.kind(), "depth": depth});

    let pass = match (a.action, map) {
        (MapAction::CheckWeak, Map::Weak(f)) => {
            let (src, dst) = (ThreadSpace::new(g, depth)?, ThreadSpace::new(h, depth)?);
            let weak = check_weak_gcell(f, &src, &dst).map_err(gate)?;
            let cont = thread_map_continuity(f, &src, &dst).map_err(gate)?;
            lines.push(format!(
                "weak g-cell map: {} (witness {})",
                weak.holds,
                pair_str(&src, g, weak.witness)
            ));
            lines.push(format!(
                "continuous on threads: {} (witness {})",
                cont.continuous,
                pair_str(&src, g, cont.witness)
            ));
            json["weak"] = serde_json::to_value(weak).map_err(anyhow::Error::from)?;
            json["continuity"] = serde_json::to_value(cont).map_err(anyhow::Error::from)?;
            if weak.holds {
                let (qg, qh) = (quotient(g, depth)?, quotient(h, depth)?);
                let induced = induce_quotient_map(f, &qg, &qh).map_err(gate)?;
                let qc = check_quotient_map_continuity(&induced.map, &qg, &qh).map_err(gate)?;
                for c in 0..qg.len() {
                    lines.push(format!(
                        "  {} -> {}",
                        class_str(&qg, g, c),
                        class_str(&qh, h, induced.map.apply(c))
                    ));
                }
                lines.push(format!("induced class map continuous: {}", qc.continuous));
                json["induced"] = json!({"table": induced.map.table, "continuity": qc});
            }
            weak.holds
        }
        (MapAction::CheckGcell, m) => {
            let f = as_gcell(m, g, h)?;
            let r = check_gcell_map(&f, g, h, depth).map_err(gate)?;
            for (label, v) in [
                ("(1) nesting", &r.nesting),
                ("(2) compatibility", &r.compatibility),
                ("(3) edges", &r.edge),
                ("(4) limit", &r.limit),
            ] {
                match v {
                    None => lines.push(format!("{label}: ok")),
                    Some(w) => lines.push(format!("{label}: fails, {}", violation_str(g, h, w))),
                }
            }
            let c = check_closeness_preservation(&f, g, h, depth).map_err(gate)?;
            lines.push(format!(
                "closeness, same level: {}; across levels: {}",
                closeness_str(g, h, &c.case_1a),
                closeness_str(g, h, &c.case_1b)
            ));
            json["conditions"] = serde_json::to_value(&r).map_err(anyhow::Error::from)?;
            json["closeness"] = serde_json::to_value(&c).map_err(anyhow::Error::from)?;
            r.passes()
        }
        (MapAction::Induce, Map::Weak(f)) => {
            let (qg, qh) = (quotient(g, depth)?, quotient(h, depth)?);
            let induced = induce_quotient_map(f, &qg, &qh).map_err(gate)?;
            for c in 0..qg.len() {
                lines.push(format!(
                    "{} -> {}",
                    class_str(&qg, g, c),
                    class_str(&qh, h, induced.map.apply(c))
                ));
            }
            json["table"] = json!(induced.map.table);
            json["commutes"] = json!(induced.commutes);
            induced.commutes
        }
        (MapAction::Induce, Map::Dt(f)) => {
            let out = dt_induce_weak(f, g, h, depth).map_err(gate)?;
            let (src, dst) = (ThreadSpace::new(g, depth)?, ThreadSpace::new(h, depth)?);
            for (t, &y) in out.map.table.iter().enumerate() {
                lines.push(format!(
                    "{} -> {}",
                    thread_str(g, src.thread(t)),
                    thread_str(h, dst.thread(y))
                ));
            }
            let weak = check_weak_gcell(&out.map, &src, &dst).map_err(gate)?;
            lines.push(format!("target 3-ball axiom: {}", out.target_three_ball));
            if !out.target_three_ball {
                lines.push("note: the target fails the 3-ball axiom, so weakness is not guaranteed".into());
            }
            lines.push(format!(
                "weak g-cell map: {} (witness {})",
                weak.holds,
                pair_str(&src, g, weak.witness)
            ));
            json["table"] = json!(out.map.table);
            json["target_three_ball"] = json!(out.target_three_ball);
            json["weak"] = serde_json::to_value(weak).map_err(anyhow::Error::from)?;
            weak.holds
        }
        (MapAction::Induce, m) => {
            let f = as_gcell(m, g, h)?;
            let induced = gcell_induce_weak(&f, g, h, depth, a.alpha.into()).map_err(gate)?;
            let (src, dst) = (ThreadSpace::new(g, depth)?, ThreadSpace::new(h, depth)?);
            lines.push(format!("alpha rule: {:?}", induced.rule));
            for tr in &induced.traces {
                let ks: Vec<String> = tr
                    .k_sets
                    .iter()
                    .enumerate()
                    .map(|(i, k)| format!("K_{}={}", i + 1, set_str(h, i + 1, k)))
                    .collect();
                lines.push(format!(
                    "{}: alpha {:?}, {} -> {}",
                    thread_str(g, &tr.thread),
                    tr.alpha,
                    ks.join(" "),
                    thread_str(h, &tr.image)
                ));
            }
            let weak = check_weak_gcell(&induced.map, &src, &dst).map_err(gate)?;
            lines.push(format!(
                "weak g-cell map: {} (witness {})",
                weak.holds,
                pair_str(&src, g, weak.witness)
            ));
            json["rule"] = serde_json::to_value(induced.rule).map_err(anyhow::Error::from)?;
            json["traces"] = serde_json::to_value(&induced.traces).map_err(anyhow::Error::from)?;
            json["table"] = json!(induced.map.table);
            json["weak"] = serde_json::to_value(weak).map_err(anyhow::Error::from)?;
            weak.holds
        }
        (MapAction::Lift, Map::Quotient(f)) => {
            let (qg, qh) = (quotient(g, depth)?, quotient(h, depth)?);
            let r = lift_quotient_map(f, &qg, &qh, g, h).map_err(gate)?;
            let c1 = &r.condition_1;
            lines.push(format!("F continuous: {}", r.quotient_continuous.continuous));
            lines.push(format!(
                "condition (1): {} (quotient map open: {}, opens saturated: {})",
                ok(c1.holds()),
                c1.projection_open,
                c1.saturated
            ));
            lines.push(format!(
                "condition (2): {}{}",
                ok(r.condition_2.holds),
                r.condition_2
                    .witness
                    .map(|c| format!(" at {}", cell_str(g, c)))
                    .unwrap_or_default()
            ));
            lines.push(format!("lift reproduces F: {}", r.reproduces));
            lines.push(format!("sufficient conditions met: {}", r.theorem_applies));
            lines.push(format!(
                "least-representative lift continuous: {} (witness {})",
                r.lift_continuity.continuous,
                pair_str(qg.threads(), g, r.lift_continuity.witness)
            ));
            json["report"] = serde_json::to_value(&r).map_err(anyhow::Error::from)?;
            match search_representatives(f, &qg, &qh, a.max_choices) {
                Ok(s) => {
                    lines.push(format!(
                        "representative choices: {}, continuous: {}",
                        s.choices, s.continuous_choices
                    ));
                    json["search"] = serde_json::to_value(&s).map_err(anyhow::Error::from)?;
                }
                Err(e) => {
                    lines.push(format!("representative search skipped: {e}"));
                    json["search"] = Value::Null;
                }
            }
            r.reproduces && !(r.theorem_applies && !r.lift_continuity.continuous)
        }
        (MapAction::Construct, Map::Quotient(f)) => {
            let (qg, qh) = (quotient(g, depth)?, quotient(h, depth)?);
            let r = construct_gcell_from_quotient_map(f, &qg, &qh, g, h).map_err(gate)?;
            lines.push(format!("interpretation: {}", r.interpretation));
            for x in r.map.cells(g) {
                let img: Vec<String> = r.map.image(x).into_iter().map(|y| cell_str(h, y)).collect();
                lines.push(format!("  f({}) = {{{}}}", cell_str(g, x), img.join(", ")));
            }
            lines.push(format!("conditions (1)-(4): {}", ok(r.conditions.passes())));
            if let Some(same) = r.reproduces {
                lines.push(format!("induced class map equals F: {same}"));
            }
            if let Some(c) = r.continuity_probe {
                lines.push(format!("experimental: induced thread map continuous: {}", c.continuous));
            }
            json["report"] = serde_json::to_value(&r).map_err(anyhow::Error::from)?;
            r.conditions.passes()
        }
        (MapAction::Semicontinuity, m) => {
            let f = as_gcell(m, g, h)?;
            let mut both = true;
            for side in [Side::Upper, Side::Lower] {
                let r = check_semicontinuity(&f, g, h, side).map_err(gate)?;
                match &r.witness {
                    None => lines.push(format!("{side:?}: ok")),
                    Some(w) => lines.push(format!(
                        "{side:?}: fails for W = {} at level {}: {} is in the set, {} is not",
                        set_str(h, w.target_level, &w.open),
                        w.target_level,
                        cell_str(g, w.inside),
                        cell_str(g, w.outside)
                    )),
                }
                both &= r.holds;
                json[format!("{side:?}").to_lowercase()] = serde_json::to_value(&r).map_err(anyhow::Error::from)?;
            }
            both
        }
        (MapAction::Singleton, m) => {
            let f = as_gcell(m, g, h)?;
            let r = check_singleton_continuity(&f, g, h, depth).map_err(gate)?;
            lines.push(format!("upper semicontinuous: {}", r.upper_semicontinuous));
            lines.push(format!("singleton images along threads: {}", r.singleton));
            if let Some((t, i)) = &r.singleton_witness {
                lines.push(format!(
                    "  f(x_{i}) ∩ H_{i} is not a singleton on thread {}",
                    thread_str(g, t)
                ));
            }
            match r.conclusion_holds() {
                None => lines.push("hypotheses fail; no conclusion asserted".into()),
                Some(c) => lines.push(format!("induced map continuous: {c}")),
            }
            if let Some(e) = &r.induce_error {
                lines.push(format!("induced map unavailable: {e}"));
            }
            json["report"] = serde_json::to_value(&r).map_err(anyhow::Error::from)?;
            r.conclusion_holds() != Some(false)
        }
        _ => unreachable!("map kinds are filtered per action"),
    };
    emit(Report { lines, json, pass }, a.json, &st.notices, out, err)
}

fn violation_str(g: &InverseSequence, h: &InverseSequence, v: &GCellViolation) -> String {
    match v {
        GCellViolation::Nesting { x, i, j, cell } => format!(
            "{} ∈ f({}) but its level-{i} projection is not",
            cell_str(h, Cell::new(*j, *cell)),
            cell_str(g, *x)
        ),
        GCellViolation::Compatibility { x, i, k, cell } => match cell {
            None => format!(
                "f({}) misses H_{k} while its level-{i} projection does not",
                cell_str(g, *x)
            ),
            Some(c) => format!(
                "{} ∈ f({}) is not in the image of its level-{i} projection",
                cell_str(h, Cell::new(*k, *c)),
                cell_str(g, *x)
            ),
        },
        GCellViolation::Edge { x, y, k, a, b } => format!(
            "{} ~ {} but {} and {} are unrelated",
            cell_str(g, *x),
            cell_str(g, *y),
            cell_str(h, Cell::new(*k, *a)),
            cell_str(h, Cell::new(*k, *b))
        ),
        GCellViolation::Limit { thread, k } => {
            format!(
                "thread {} has no coordinate with a nonempty Hausdorff piece in H_{k}",
                thread_str(g, thread)
            )
        }
    }
}

fn closeness_str(g: &InverseSequence, h: &InverseSequence, w: &Option<ClosenessWitness>) -> String {
    match w {
        None => "preserved".into(),
        Some(w) => format!(
            "fails: {} and {} are close, {} and {} are not",
            cell_str(g, w.x),
            cell_str(g, w.y),
            cell_str(h, w.a),
            cell_str(h, w.b)
        ),
    }
}

fn write_output(out: &mut dyn Write, path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> Outcome {
    let st = load(&a.file)?;
    let text = match a.format {
        ExportFormat::Json => format::canonical_json(&st)?,
        ExportFormat::Dot => dot::render(&st),
    };
    write_output(out, a.out.as_deref(), &text)?;
    Ok(true)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Outcome {
    let spec = GeneratorSpec {
        name: a.generator.into(),
        levels: a.levels,
        resolution: a.resolution,
        topology: match a.topology {
            TopologyArg::Discrete => Topology::Discrete,
            TopologyArg::Khalimsky => Topology::Khalimsky,
        },
    };
    let st = match generate(&spec).map_err(anyhow::Error::from)? {
        Generated::Sequence(s) => Structure::new(s),
        Generated::Map { source, target, map } => Structure::new(source)
            .with_target(target)
            .with_map("full_image", Map::Gcell(map)),
    };
    write_output(out, a.out.as_deref(), &format::canonical_json(&st)?)?;
    Ok(true)
}
