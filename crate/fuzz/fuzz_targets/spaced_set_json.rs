#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::io::parse_spaced_set;

fuzz_target!(|data: &str| {
    if let Ok(x) = parse_spaced_set(data) {
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(parse_spaced_set(&text).unwrap(), x);
        assert!(x.len() >= 2);
    }
});
