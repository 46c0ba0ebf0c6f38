#![no_main]

use libfuzzer_sys::fuzz_target;
use lsl_core::bounds::{verify_lemma, verify_theorem1};
use lsl_core::io::parse_spaced_spec;

fuzz_target!(|data: &str| {
    let Ok(spec) = parse_spaced_spec(data) else { return };
    let Ok(p) = spec.resolve() else { return };
    if p.x.len() > 256 || p.y.len() > 256 || p.a.iter().any(|z| z.norm() > 1e6) {
        return;
    }
    // both inequalities are theorems; a failure here is a bug in the bounds or the evaluation
    assert!(verify_lemma(&p.x, &p.a, &p.y).unwrap().passed());
    assert!(verify_theorem1(&p.x, &p.a, &p.y).unwrap().passed());
});
