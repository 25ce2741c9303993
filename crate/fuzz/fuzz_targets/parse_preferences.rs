#![no_main]
use evenif::io::{parse_preferences, serialize_preferences};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = usize::from(n % 32);
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(rules) = parse_preferences(text, n) {
            assert_eq!(parse_preferences(&serialize_preferences(&rules), n).unwrap(), rules);
        }
    }
});
