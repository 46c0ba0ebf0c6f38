#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::io::parse_farey;

fuzz_target!(|data: &str| {
    if let Ok(seq) = parse_farey(data) {
        let text = serde_json::to_string(&seq).unwrap();
        assert_eq!(parse_farey(&text).unwrap(), seq);
    }
});
