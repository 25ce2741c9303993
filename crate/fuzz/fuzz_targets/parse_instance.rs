#![no_main]
use evenif::io::parse_instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(x) = parse_instance(text, usize::from(n)) {
            assert_eq!(x.len(), usize::from(n));
        }
    }
});
