#![no_main]
use evenif::io::{parse_model, serialize_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = parse_model(text) {
            let again = parse_model(&serialize_model(&model)).expect("serialized model parses");
            assert_eq!(again, model);
        }
    }
});
