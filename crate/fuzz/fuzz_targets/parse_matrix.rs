#![no_main]

use freecap::problem::{matrix_to_value, parse_matrix};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = freecap::problem::parse_matrix_str(text) {
        let again = parse_matrix(&matrix_to_value(&m), "$").expect("serialized matrix should parse");
        assert_eq!(m, again);
    }
});
