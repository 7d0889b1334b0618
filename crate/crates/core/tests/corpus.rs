//! Replays the checked-in fuzz corpus through the decoders. Every seed,
//! valid or hostile, must come back as Ok or Err without panicking; the
//! valid ones must round-trip.

use std::fs;
use std::path::PathBuf;

use symact_core::rational::parse_rational;
use symact_core::tensor::io::{
    operator_from_json_str, operator_to_json_string, state_from_json_str, state_to_json_string,
};

fn corpus_dir(target: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target)
}

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = corpus_dir(target);
    let mut out: Vec<(PathBuf, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus dir {}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.expect("dir entry").path();
            let bytes = fs::read(&path).expect("seed readable");
            (path, bytes)
        })
        .collect();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out.sort();
    out
}

#[test]
fn operator_seeds_decode_without_panicking() {
    let mut accepted = 0usize;
    for (path, bytes) in seeds("operator_json") {
        let Ok(text) = std::str::from_utf8(&bytes) else {
            continue;
        };
        if let Ok(op) = operator_from_json_str(text) {
            accepted += 1;
            let reparsed = operator_from_json_str(&operator_to_json_string(&op)).unwrap();
            assert_eq!(reparsed.layout(), op.layout(), "{}", path.display());
            assert_eq!(reparsed.entries(), op.entries(), "{}", path.display());
        }
    }
    assert!(accepted > 0, "corpus holds no valid operator at all");
}

#[test]
fn state_seeds_decode_without_panicking() {
    let mut accepted = 0usize;
    for (path, bytes) in seeds("state_json") {
        let Ok(text) = std::str::from_utf8(&bytes) else {
            continue;
        };
        if let Ok(state) = state_from_json_str(text) {
            accepted += 1;
            let reparsed = state_from_json_str(&state_to_json_string(&state)).unwrap();
            assert_eq!(reparsed.layout(), state.layout(), "{}", path.display());
            assert_eq!(
                reparsed.amplitudes(),
                state.amplitudes(),
                "{}",
                path.display()
            );
        }
    }
    assert!(accepted > 0, "corpus holds no valid state at all");
}

#[test]
fn rational_seeds_parse_without_panicking() {
    let mut accepted = 0usize;
    for (path, bytes) in seeds("rational") {
        let Ok(text) = std::str::from_utf8(&bytes) else {
            continue;
        };
        if let Ok(value) = parse_rational(text) {
            accepted += 1;
            // Parsing the canonical rendering must reproduce the value.
            assert_eq!(
                parse_rational(&value.to_string()).unwrap(),
                value,
                "{}",
                path.display()
            );
        }
    }
    assert!(accepted > 0, "corpus holds no valid rational at all");
}
