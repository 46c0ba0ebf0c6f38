#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::io::parse_amplitude_file;

fuzz_target!(|data: &str| {
    if let Ok(file) = parse_amplitude_file(data) {
        if let Ok(a) = file.amplitudes() {
            assert_eq!(a.len() as u64, file.n);
            assert!(a.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        }
    }
});
