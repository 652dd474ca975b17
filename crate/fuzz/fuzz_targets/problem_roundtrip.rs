#![no_main]

use freecap::problem::parse_problem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_problem(text) else {
        return;
    };
    let again = parse_problem(&spec.to_json()).expect("serialized problem should parse");
    assert_eq!(spec, again, "problem should survive a round trip");
});
