use std::fs;
use std::path::PathBuf;

use cellstruct_cli::{fixtures, format, run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("cellstruct").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

#[test]
fn dyadic_check_passes_with_uniform_levels() {
    let r = cli(&["check", &fixture("dyadic"), "--depth", "5", "--cell-structure"]);
    assert_eq!(r.code, EXIT_OK, "{}{}", r.out, r.err);
    assert!(r.out.contains("depth 5"));
    assert!(
        r.out.contains("(b) ok [i=1 j=1, i=2 j=3, i=3 j=4, i=4 j=5]"),
        "{}",
        r.out
    );
}

#[test]
fn strict_equivalence_fails_on_cross() {
    let loose = cli(&["check", &fixture("ex_fcont")]);
    assert_eq!(loose.code, EXIT_OK);
    assert!(loose.out.contains("warning: thread relation is not transitive"));
    let strict = cli(&["check", &fixture("ex_fcont"), "--strict-equivalence"]);
    assert_eq!(strict.code, EXIT_FAIL);
    assert!(
        strict.out.contains("v1/v1/v1/v1 ~ h2/h2/h2/h2 ~ v2/v2/v2/v2"),
        "{}",
        strict.out
    );
}

#[test]
fn broken_file_is_a_usage_error() {
    let r = cli(&["check", &fixture("broken")]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("unknown cell `z` at level 2"), "{}", r.err);
    assert_eq!(cli(&["check", "/nonexistent.json"]).code, EXIT_USAGE);
}

#[test]
fn depth_out_of_range_is_a_usage_error() {
    let r = cli(&["check", &fixture("cantor"), "--depth", "9"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("out of range"));
    assert_eq!(cli(&["check", &fixture("cantor"), "--depth", "0"]).code, EXIT_USAGE);
}

#[test]
fn argument_errors_and_help() {
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["map", "explode", &fixture("cantor")]).code, EXIT_USAGE);
    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("export"));
}

#[test]
fn map_selection() {
    // Two dt maps: the name is required.
    let r = cli(&["map", "induce", &fixture("dt_shift")]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("--map"));
    assert_eq!(
        cli(&["map", "induce", &fixture("dt_shift"), "--map", "nope"]).code,
        EXIT_USAGE
    );
    assert_eq!(cli(&["map", "check-weak", &fixture("dt_shift")]).code, EXIT_USAGE);
    // Thread maps carry their own depth.
    assert_eq!(
        cli(&[
            "map",
            "check-weak",
            &fixture("ex_fcont"),
            "--map",
            "jump",
            "--depth",
            "3"
        ])
        .code,
        EXIT_USAGE
    );
}

#[test]
fn full_image_checks() {
    let r = cli(&["map", "check-gcell", &fixture("full_image")]);
    assert_eq!(r.code, EXIT_OK);
    for c in [
        "(1) nesting: ok",
        "(2) compatibility: ok",
        "(3) edges: ok",
        "(4) limit: ok",
    ] {
        assert!(r.out.contains(c), "{}", r.out);
    }
    assert_eq!(cli(&["map", "semicontinuity", &fixture("full_image")]).code, EXIT_OK);
    let s = cli(&["map", "singleton", &fixture("full_image"), "--depth", "3"]);
    assert_eq!(s.code, EXIT_OK);
    assert!(s.out.contains("hypotheses fail"));
}

#[test]
fn full_image_induce_trace() {
    let r = cli(&["map", "induce", &fixture("full_image"), "--depth", "3"]);
    assert_eq!(r.code, EXIT_OK);
    let full = "K_1={0, 1} K_2={00, 01, 10, 11} K_3={000, 001, 010, 011, 100, 101, 110, 111} -> 0/00/000";
    assert_eq!(r.out.matches(full).count(), 8, "{}", r.out);
}

#[test]
fn cross_maps() {
    let jump = cli(&["map", "check-weak", &fixture("ex_fcont"), "--map", "jump"]);
    assert_eq!(jump.code, EXIT_OK);
    assert!(jump.out.contains("continuous on threads: false"));
    assert!(jump.out.contains("induced class map continuous: true"));
    let straight = cli(&["map", "check-weak", &fixture("ex_fcont"), "--map", "straight"]);
    assert!(straight.out.contains("continuous on threads: true"));
    let lift = cli(&["map", "lift", &fixture("ex_fcont")]);
    assert_eq!(lift.code, EXIT_OK);
    assert!(
        lift.out.contains("representative choices: 5, continuous: 1"),
        "{}",
        lift.out
    );
}

#[test]
fn sine_lift_report() {
    let r = cli(&["map", "lift", &fixture("sine"), "--depth", "4"]);
    assert!(r.out.contains("condition (1): fails"));
    assert!(r.out.contains("condition (2): fails"));
    assert!(r.out.contains("sufficient conditions met: false"));
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn construct_gate_is_a_check_failure() {
    let r = cli(&["map", "construct", &fixture("sine")]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.err.contains("not a simplex"), "{}", r.err);
}

#[test]
fn dt_shift_is_not_weak() {
    let id = cli(&["map", "induce", &fixture("dt_shift"), "--map", "identity"]);
    assert_eq!(id.code, EXIT_OK);
    let shift = cli(&["map", "induce", &fixture("dt_shift"), "--map", "shift"]);
    assert_eq!(shift.code, EXIT_FAIL);
    assert!(shift
        .out
        .contains("weak g-cell map: false (witness (0/0/0/01, 0/0/1/02))"));
}

#[test]
fn json_reports_stamp_depth() {
    let r = cli(&["map", "lift", &fixture("sine"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["depth"], 4);
    assert_eq!(v["search"]["choices"], 5);
    let c = cli(&["check", &fixture("cantor"), "--depth", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&c.out).unwrap();
    assert_eq!(v["depth"], 3);
    assert_eq!(v["source"]["threads"], 8);
}

#[test]
fn reports_are_deterministic() {
    for args in [vec!["check", "--cell-structure"], vec!["map", "lift"]] {
        let mut a = args.clone();
        let f = fixture(if args[0] == "check" { "ex_fcont" } else { "sine" });
        a.insert(if args[0] == "check" { 1 } else { 2 }, &f);
        assert_eq!(cli(&a).out, cli(&a).out);
    }
}

#[test]
fn export_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in fixtures::NAMES {
        let path = dir.path().join(format!("{name}.json"));
        let r = cli(&[
            "export",
            &fixture(name),
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(r.code, EXIT_OK);
        assert_eq!(fs::read(&path).unwrap(), fs::read(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn export_dot_counts() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d3.json");
    let g = cli(&[
        "gen",
        "dyadic_interval",
        "--levels",
        "3",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(g.code, EXIT_OK);
    let r = cli(&["export", file.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.matches("[label=").count(), 2 + 4 + 8);
    let f = cli(&["export", &fixture("full_image"), "--format", "dot"]);
    assert!(f.out.contains("style=dashed"));
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let r = cli(&[
        "export",
        &fixture("cantor"),
        "--format",
        "dot",
        "--out",
        "/nonexistent/dir/x.dot",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn closure_notice() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("open.json");
    fs::write(
        &file,
        r#"{"version": 1, "levels": [{"cells": ["a", "b", "c"], "relation": [["a", "b"], ["b", "c"]]}]}"#,
    )
    .unwrap();
    let r = cli(&["check", file.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(
        r.err.contains("notice: source level 1: closure added 2 pair(s)"),
        "{}",
        r.err
    );
}

#[test]
fn every_generator_emits_a_loadable_file() {
    for (g, extra) in [
        ("dyadic_interval", &[][..]),
        ("cantor", &[]),
        ("ex_fcont_G", &[]),
        ("ex_fcont_H", &["--topology", "khalimsky"]),
        ("sine_curve_H", &["--resolution", "3"]),
        ("khalimsky_interval", &[]),
        ("full_image_map", &[]),
    ] {
        let mut args = vec!["gen", g];
        args.extend_from_slice(extra);
        let r = cli(&args);
        assert_eq!(r.code, EXIT_OK, "{g}: {}", r.err);
        let st = format::parse(&r.out).unwrap();
        assert_eq!(st.source.num_levels(), 4, "{g}");
        assert_eq!(format::canonical_json(&st).unwrap(), r.out, "{g}");
    }
}

#[test]
fn small_cross_source() {
    let r = cli(&["gen", "ex_fcont_G", "--levels", "2", "--resolution", "2"]);
    let st = format::parse(&r.out).unwrap();
    for n in 1..=2 {
        let g = st.source.level(n);
        assert_eq!(g.len(), 5);
        assert_eq!(g.relation().pairs().filter(|(a, b)| a != b).count(), 0);
    }
}
