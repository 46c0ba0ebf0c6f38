#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::arith::Rational;

fuzz_target!(|data: &str| {
    if let Ok(x) = data.parse::<Rational>() {
        // printing is canonical, so it parses back to the same value
        let text = x.to_string();
        assert_eq!(text.parse::<Rational>().unwrap(), x);
        assert_eq!(text.parse::<Rational>().unwrap().to_string(), text);
    }
});
