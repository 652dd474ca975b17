//! Replays the checked-in fuzz corpus through the fuzz-target invariants.

use std::path::PathBuf;

use freecap::problem::{matrix_to_value, parse_matrix, parse_matrix_str, parse_problem};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn problem_seeds_round_trip() {
    let mut parsed = 0;
    for (path, text) in seeds("problem_roundtrip") {
        match parse_problem(&text) {
            Ok(spec) => {
                parsed += 1;
                assert_eq!(parse_problem(&spec.to_json()).unwrap(), spec, "{}", path.display());
            }
            Err(e) => assert!(e.path().starts_with('$'), "{}", path.display()),
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn matrix_seeds_round_trip() {
    for (path, text) in seeds("parse_matrix") {
        if let Ok(m) = parse_matrix_str(&text) {
            assert_eq!(parse_matrix(&matrix_to_value(&m), "$").unwrap(), m, "{}", path.display());
        }
    }
}
