#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::bounds::{corollary_lhs, corollary_lhs_direct};
use lsl_core::io::parse_instance_spec;

fuzz_target!(|data: &str| {
    let Ok(spec) = parse_instance_spec(data) else { return };
    if spec.order > 40 || spec.n > 64 {
        return;
    }
    let Ok(inst) = spec.to_instance() else { return };
    if inst.amplitude.a.iter().any(|z| z.norm() > 1e6) {
        return;
    }
    let direct = corollary_lhs_direct(&inst).unwrap();
    let reduced = corollary_lhs(&inst).unwrap();
    assert!((direct - reduced).abs() <= 1e-6 * (1.0 + direct), "{direct} vs {reduced}");
});
