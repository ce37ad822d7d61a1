//! The files in `fixtures/` are the canonical JSON of `fixtures::build`.
//! Set `CELLSTRUCT_BLESS=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use cellstruct_cli::{fixtures, format};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn fixture_files_are_canonical() {
    let bless = std::env::var_os("CELLSTRUCT_BLESS").is_some();
    for name in fixtures::NAMES {
        let want = format::canonical_json(&fixtures::build(name).unwrap()).unwrap();
        let path = dir().join(format!("{name}.json"));
        if bless {
            fs::write(&path, &want).unwrap();
        }
        let have = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(have, want, "{name}.json is stale; rerun with CELLSTRUCT_BLESS=1");
    }
}

#[test]
fn fixtures_reload_to_a_fixed_point() {
    for name in fixtures::NAMES {
        let text = fs::read_to_string(dir().join(format!("{name}.json"))).unwrap();
        let st = format::parse(&text).unwrap();
        assert!(st.notices.is_empty(), "{name}: {:?}", st.notices);
        assert_eq!(format::canonical_json(&st).unwrap(), text, "{name}");
    }
}

#[test]
fn broken_fixture_is_rejected() {
    let text = fs::read_to_string(dir().join("broken.json")).unwrap();
    let e = format::parse(&text).unwrap_err();
    assert!(format!("{e:#}").contains("unknown cell"), "{e:#}");
}
