use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use lsl_core::arith::Rational;
use lsl_core::bounds::{corollary_lhs, corollary_lhs_direct, verify_corollary, verify_lemma, verify_theorem1};
use lsl_core::expsum::{l2_moment, majorisation_check, sieve_sum};
use lsl_core::farey::{farey, SpacedSet};
use lsl_core::io::{parse_instance_spec, parse_spaced_set, AmplitudeSource, InstanceSpec, JsonInt};
use lsl_core::lattice::SupR;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..=10_000, 1i64..=500).prop_map(|(n, d)| Rational::new(n, d))
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)), n)
}

fn spaced_problem() -> impl Strategy<Value = (SpacedSet, Vec<Complex64>, Vec<BigInt>)> {
    (prop::collection::vec(rational(), 2..20), 1usize..16).prop_flat_map(|(pts, n)| {
        (Just(pts), amplitudes(n), prop::collection::vec(-2000i64..=2000, n)).prop_filter_map("needs two distinct points", |(pts, a, y)| {
            let x = SpacedSet::from_points(pts).ok()?;
            Some((x, a, y.into_iter().map(BigInt::from).collect()))
        })
    })
}

fn spec(c0: Rational, c1: Rational, c2: Rational, m: i64, n: u64, order: u64, seed: u64) -> InstanceSpec {
    InstanceSpec { c0, c1, c2, p: None, q: None, m: JsonInt(m.into()), n, order, a: AmplitudeSource::Random(seed) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(x in rational()) {
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn spaced_set_json_round_trip(pts in prop::collection::vec(rational(), 2..30)) {
        if let Ok(x) = SpacedSet::from_points(pts) {
            let text = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(parse_spaced_set(&text).unwrap(), x);
        }
    }

    #[test]
    fn inequalities_hold_on_random_spaced_sets((x, a, y) in spaced_problem()) {
        prop_assert!(verify_lemma(&x, &a, &y).unwrap().passed());
        prop_assert!(verify_theorem1(&x, &a, &y).unwrap().passed());
    }

    #[test]
    fn sieve_sum_ignores_a_common_shift((x, a, y) in spaced_problem(), shift in -1_000_000i64..=1_000_000) {
        // |f| is unchanged when every frequency moves by the same integer
        let shifted: Vec<BigInt> = y.iter().map(|v| v + shift).collect();
        let s0 = sieve_sum(x.points(), &a, &y).unwrap();
        let s1 = sieve_sum(x.points(), &a, &shifted).unwrap();
        prop_assert!((s0 - s1).abs() <= 1e-9 * (1.0 + s0.abs()));
    }

    #[test]
    fn majorisation((_, a, y) in spaced_problem(), bump in prop::collection::vec(1e-3f64..2.0, 16)) {
        let b: Vec<f64> = a.iter().zip(&bump).map(|(z, e)| z.norm() + e).collect();
        let rep = majorisation_check(&a, &b, &y).unwrap();
        prop_assert!(rep.passed());
        prop_assert!(l2_moment(&a, &y).unwrap() <= rep.rhs + rep.error_budget);
    }

    #[test]
    fn farey_instances_satisfy_their_invariants(
        c0 in (1i64..=30, 1i64..=30),
        pq in (-4i64..=4, 1i64..=4),
        c2 in rational(),
        m in -1_000_000i64..=1_000_000,
        n in 1u64..=8,
        order in 2u64..=12,
        seed in any::<u64>(),
    ) {
        let c0 = Rational::new(c0.0, c0.1);
        let c1 = &c0 * &Rational::new(pq.0, pq.1);
        let inst = spec(c0.clone(), c1, c2, m, n, order, seed).to_instance().unwrap();
        let amp = &inst.amplitude;
        let alpha = &amp.c0 / &Rational::from_integer(amp.q.clone());
        prop_assert_eq!(amp.alpha(), alpha.clone());
        prop_assert!(inst.farey.len() as u64 <= order * order);
        if let Some(x) = &inst.spaced {
            prop_assert_eq!(x.delta(), &(&alpha / &Rational::from_integer((order * order) as i64)));
        }
        for (k, yi) in inst.frequencies.iter().enumerate() {
            let i = BigInt::from(m) + (k as i64 + 1);
            prop_assert_eq!(yi, &(&amp.q * &i * &i + &amp.p * &i));
        }
        let direct = corollary_lhs_direct(&inst).unwrap();
        let reduced = corollary_lhs(&inst).unwrap();
        prop_assert!((direct - reduced).abs() <= 1e-9 * (1.0 + direct));

        let rep = verify_corollary(&inst, &SupR::new(144 * 8u64.pow(4))).unwrap();
        prop_assert!(rep.pass);
        if let Some(t) = &rep.theorem1 {
            prop_assert!(rep.report.rhs >= t.rhs);
        }
    }

    #[test]
    fn negated_polynomial_gives_the_same_sum(
        c0 in (1i64..=9, 1i64..=9),
        c2 in rational(),
        m in -1000i64..=1000,
        n in 1u64..=6,
        order in 3u64..=9,
    ) {
        let c0 = Rational::new(c0.0, c0.1);
        let c1 = &c0 * &Rational::new(1, 2);
        let pos = spec(c0.clone(), c1.clone(), c2.clone(), m, n, order, 1).to_instance().unwrap();
        let neg = InstanceSpec { a: AmplitudeSource::Explicit(pos.amplitude.a.iter().map(|z| z.conj()).collect()), ..spec(-c0, -c1, -c2, m, n, order, 1) };
        let neg = neg.to_instance().unwrap();
        let (a, b) = (corollary_lhs_direct(&pos).unwrap(), corollary_lhs_direct(&neg).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }
}

#[test]
fn farey_spaced_set_certificate() {
    let x = farey(7).unwrap().as_spaced_set(&Rational::new(3, 2)).unwrap();
    assert_eq!(x.delta(), &Rational::new(3, 98));
    assert_eq!(x.enclosure(), &Rational::new(3, 2));
    assert_eq!(x.len(), 17);
}

#[test]
fn spec_file_with_every_field() {
    let text = r#"{"c0":"3/2","c1":"1/2","c2":"1/5","p":1,"q":3,"M":"1000000000000","N":8,"Q":10,"a":"random(5)"}"#;
    let inst = parse_instance_spec(text).unwrap().to_instance().unwrap();
    assert_eq!(inst.amplitude.alpha(), Rational::new(1, 2));
    assert_eq!(inst.frequencies[0], BigInt::from(3) * BigInt::from(1_000_000_000_001u64).pow(2) + BigInt::from(1_000_000_000_001u64));
}
