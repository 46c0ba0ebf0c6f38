//! Explicit large sieve bounds and their verification on concrete instances.
//!
//! For a `delta`-spaced set `X` in `[-P, P]`, integer frequencies `y_i` and
//! amplitudes `a_i`, with `f(t) = sum a_i e(t y_i)` and `f*` the same sum with
//! amplitudes `|a_i|`:
//!
//! * single-sum form, for any `T >= max |y_i|`:
//!   `|sum_X f(x)| <= pi (|X| T + |X|/delta)^{1/2} (P + 2)^{1/2} (int_0^1 |f*|^2)^{1/2}`;
//! * quadratic form, with `Delta = max y - min y` and additive counts `A_Y`:
//!   `sum_X |f(x)|^2 <= pi (|X| Delta + |X|/delta)^{1/2} (P + 2)^{1/2} sup_k A_Y(k)^{1/2} ||a||^2`;
//! * Farey form, for `P(T) = c0 T^2 + c1 T + c2` with `c1/c0 = p/q`, `c0 > 0`:
//!   `sum_{x in F(Q)} |sum_{M < i <= M+N} a_i e(x P(i))|^2
//!      <= (Q^2 + Q sqrt(c0 N (|M| + 2N + |p/q| + 1))) Pi' ||a||^2`,
//!   `Pi' = pi (2q/c0 + 1)^{1/2} sup_{1 <= n <= 144 N^4} r(n)`.
//!
//! The Farey form follows from the quadratic form applied to `X = alpha F(Q)`,
//! `alpha = c0/q`, `y_i = q i^2 + p i`, since `x P(i) = x alpha y_i + x c2`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::expsum::{eval_f_rational, l2_moment, norm_sq, sieve_sum, sum_over_points, QuadraticAmplitude};
use crate::farey::{farey, FareySequence, SpacedSet};
use crate::lattice::{AdditiveProfile, SupR};
use crate::report::{factors, rounding_budget, BoundReport};
use crate::summation::sum;

fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

fn card(x: &SpacedSet) -> Rational {
    Rational::from_integer(x.len() as i64)
}

/// `|X| T + |X| / delta`, exactly.
fn spacing_term(x: &SpacedSet, t: &BigInt) -> Rational {
    let c = card(x);
    &c * &Rational::from_integer(t.clone()) + &c / x.delta()
}

fn enclosure_term(x: &SpacedSet) -> Rational {
    x.enclosure() + &Rational::from_integer(2)
}

/// Right side of the single-sum inequality.
pub fn lemma_rhs(x: &SpacedSet, t: &BigInt, l2_abs: f64) -> f64 {
    lemma_rhs_with_factors(x, t, l2_abs).0
}

fn lemma_rhs_with_factors(x: &SpacedSet, t: &BigInt, l2_abs: f64) -> (f64, BTreeMap<String, f64>) {
    let spacing = spacing_term(x, t).to_f64();
    let encl = enclosure_term(x).to_f64();
    let rhs = PI * spacing.sqrt() * encl.sqrt() * l2_abs.sqrt();
    let f = factors([
        ("card_x", x.len() as f64),
        ("t", big_to_f64(t)),
        ("delta", x.delta().to_f64()),
        ("p", x.enclosure().to_f64()),
        ("l2_abs", l2_abs),
    ]);
    (rhs, f)
}

/// Checks the single-sum inequality with `T = max |y_i|`.
pub fn verify_lemma(x: &SpacedSet, a: &[Complex64], y: &[BigInt]) -> Result<BoundReport> {
    let total = sum_over_points(x.points(), a, y)?;
    let lhs = total.norm();
    let t = y.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
    let mags: Vec<Complex64> = a.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    let l2_abs = l2_moment(&mags, y)?;
    let (rhs, f) = lemma_rhs_with_factors(x, &t, l2_abs);
    let a1: f64 = sum(a.iter().map(|z| z.norm()));
    let budget = rounding_budget(a.len() + x.len(), x.len() as f64 * a1) + rounding_budget(8, rhs);
    Ok(BoundReport::new("lemma", lhs, rhs, f, budget))
}

/// Right side of the quadratic-form inequality.
pub fn theorem1_rhs(x: &SpacedSet, profile: &AdditiveProfile, norm_sq: f64) -> f64 {
    theorem1_rhs_with_factors(x, &profile.diameter, profile.sup_a, norm_sq).0
}

fn theorem1_rhs_with_factors(x: &SpacedSet, diameter: &BigInt, sup_a: u64, norm_sq: f64) -> (f64, BTreeMap<String, f64>) {
    let spacing = spacing_term(x, diameter).to_f64();
    let encl = enclosure_term(x).to_f64();
    let rhs = PI * spacing.sqrt() * encl.sqrt() * (sup_a as f64).sqrt() * norm_sq;
    let f = factors([
        ("card_x", x.len() as f64),
        ("diameter", big_to_f64(diameter)),
        ("delta", x.delta().to_f64()),
        ("p", x.enclosure().to_f64()),
        ("sup_a", sup_a as f64),
        ("norm_sq", norm_sq),
    ]);
    (rhs, f)
}

/// Same right side with an explicit diameter in place of the measured one.
pub fn theorem1_rhs_with_diameter(x: &SpacedSet, diameter: &BigInt, sup_a: u64, norm_sq: f64) -> f64 {
    theorem1_rhs_with_factors(x, diameter, sup_a, norm_sq).0
}

/// Checks the quadratic-form inequality with the measured diameter and `sup_k A_Y(k)`.
pub fn verify_theorem1(x: &SpacedSet, a: &[Complex64], y: &[BigInt]) -> Result<BoundReport> {
    let lhs = sieve_sum(x.points(), a, y)?;
    let profile = AdditiveProfile::from_values(y)?;
    let n2 = norm_sq(a);
    let (rhs, f) = theorem1_rhs_with_factors(x, &profile.diameter, profile.sup_a, n2);
    let a1: f64 = sum(a.iter().map(|z| z.norm()));
    let budget = rounding_budget(a.len() + x.len(), x.len() as f64 * a1 * a1) + rounding_budget(8, rhs);
    Ok(BoundReport::new("theorem1", lhs, rhs, f, budget))
}

/// Largest Farey order accepted for an instance; `|F(Q)|` is about `0.3 Q^2`.
pub const MAX_ORDER: u64 = 5000;

/// A Farey-form instance with its derived data.
#[derive(Debug, Clone)]
pub struct SieveInstance {
    pub amplitude: QuadraticAmplitude,
    pub order: u64,
    pub farey: FareySequence,
    /// `alpha F(Q)`; absent for `Q = 2`, where the set is a single point.
    pub spaced: Option<SpacedSet>,
    pub frequencies: Vec<BigInt>,
    pub profile: AdditiveProfile,
}

impl SieveInstance {
    pub fn new(amplitude: QuadraticAmplitude, order: u64) -> Result<Self> {
        if order < 2 {
            return Err(Error::domain(format!("Farey order must be at least 2, got {order}")));
        }
        if order > MAX_ORDER {
            return Err(Error::domain(format!("Farey order {order} exceeds {MAX_ORDER}")));
        }
        let farey = farey(order)?;
        let alpha = amplitude.alpha();
        let spaced = if farey.len() >= 2 { Some(farey.as_spaced_set(&alpha)?) } else { None };
        let frequencies = amplitude.frequencies();
        let profile = AdditiveProfile::from_values(&frequencies)?;
        Ok(SieveInstance { amplitude, order, farey, spaced, frequencies, profile })
    }

    /// The points `x alpha`, `x in F(Q)`, at which the reduced sum is evaluated.
    pub fn scaled_points(&self) -> Vec<Rational> {
        let alpha = self.amplitude.alpha();
        self.farey.fractions().iter().map(|x| x * &alpha).collect()
    }

    /// `c0 N (|M| + 2N + |p/q| + 1)`, exactly.
    pub fn window_term(&self) -> Rational {
        let amp = &self.amplitude;
        let n = Rational::from_integer(amp.n as i64);
        let inner = Rational::from_integer(amp.abs_m())
            + Rational::from_integer(2 * amp.n as i64)
            + Rational::reduce(amp.p.abs(), amp.q.clone()).expect("q > 0")
            + Rational::one();
        &amp.c0 * &n * inner
    }
}

/// Right side of the Farey-form inequality and its factors.
pub fn corollary_rhs(inst: &SieveInstance, sup_r: &SupR) -> Result<(f64, BTreeMap<String, f64>)> {
    let amp = &inst.amplitude;
    let lattice = sup_r.sup_for_window(amp.n)?;
    let q_f = inst.order as f64;
    let window = inst.window_term().to_f64();
    let scale = q_f * q_f + q_f * window.sqrt();
    let two_q_over_c0 = (Rational::from_integer(2 * amp.q.clone()) / &amp.c0 + Rational::one()).to_f64();
    let pi_prime = PI * two_q_over_c0.sqrt() * lattice as f64;
    let n2 = amp.norm_sq();
    let rhs = scale * pi_prime * n2;
    let f = factors([
        ("order", q_f),
        ("window_term", window),
        ("scale", scale),
        ("sup_r", lattice as f64),
        ("pi_prime", pi_prime),
        ("norm_sq", n2),
    ]);
    Ok((rhs, f))
}

/// Farey-form verification, with the reduced-data quadratic-form check alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    #[serde(flatten)]
    pub report: BoundReport,
    /// The left side evaluated from the phases `x P(i)` themselves.
    pub direct_lhs: f64,
    /// Quadratic-form check on `alpha F(Q)`, absent when `Q = 2`.
    pub theorem1: Option<BoundReport>,
    pub pass: bool,
}

/// `sum_{x in F(Q)} |sum a_i e(x P(i))|^2` straight from the rational values `P(i)`.
pub fn corollary_lhs_direct(inst: &SieveInstance) -> Result<f64> {
    let values = inst.amplitude.poly_values();
    let a = &inst.amplitude.a;
    let terms: Vec<f64> = inst
        .farey
        .fractions()
        .par_iter()
        .map(|x| eval_f_rational(a, &values, x).map(|f| f.norm_sqr()))
        .collect::<Result<_>>()?;
    Ok(sum(terms))
}

/// The left side through `x P(i) = (x alpha) y_i + x c2`; the constant phase drops out of the modulus.
pub fn corollary_lhs(inst: &SieveInstance) -> Result<f64> {
    sieve_sum(&inst.scaled_points(), &inst.amplitude.a, &inst.frequencies)
}

pub fn verify_corollary(inst: &SieveInstance, sup_r: &SupR) -> Result<CorollaryReport> {
    let lhs = corollary_lhs(inst)?;
    let direct_lhs = corollary_lhs_direct(inst)?;
    let (rhs, f) = corollary_rhs(inst, sup_r)?;
    let a = &inst.amplitude.a;
    let a1: f64 = sum(a.iter().map(|z| z.norm()));
    let card = inst.farey.len();
    let budget = rounding_budget(a.len() + card, card as f64 * a1 * a1) + rounding_budget(8, rhs);
    let report = BoundReport::new("corollary", lhs, rhs, f, budget);
    let theorem1 = match &inst.spaced {
        Some(x) => Some(verify_theorem1(x, a, &inst.frequencies)?),
        None => None,
    };
    let pass = report.passed() && theorem1.as_ref().map_or(true, BoundReport::passed);
    Ok(CorollaryReport { report, direct_lhs, theorem1, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    #[serde(rename = "Q")]
    pub order: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub lhs: f64,
    /// `(N Q + Q^2) ||a||^2`.
    pub scale: f64,
    pub ratio: f64,
    /// `rhs / scale`, the Farey-form bound in the same normalization.
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub rows: Vec<SharpnessRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Smallest order used by the sharpness probe. `F(2) = {1/2}` is a single
/// point, and `e(1/2) + e(2) = 0` already makes its sum vanish for `N = 2`.
pub const SHARPNESS_MIN_ORDER: u64 = 3;

/// Tabulates `lhs / ((N Q + Q^2) ||a||^2)` for `P(T) = T^2`, `a_i = 1`, `M = 0`
/// over `3 <= Q <= q_max`, `1 <= N <= n_max`.
pub fn sharpness_probe(q_max: u64, n_max: u64, sup_r: &SupR) -> Result<SharpnessTable> {
    if q_max < SHARPNESS_MIN_ORDER || n_max < 1 {
        return Err(Error::domain(format!("need Qmax >= {SHARPNESS_MIN_ORDER} and Nmax >= 1")));
    }
    sup_r.sup_for_window(n_max)?;
    let cells: Vec<(u64, u64)> = (SHARPNESS_MIN_ORDER..=q_max).flat_map(|q| (1..=n_max).map(move |n| (q, n))).collect();
    let rows: Vec<SharpnessRow> = cells
        .par_iter()
        .map(|&(order, n)| {
            let a = vec![Complex64::new(1.0, 0.0); n as usize];
            let amp = QuadraticAmplitude::new(Rational::one(), Rational::zero(), Rational::zero(), BigInt::zero(), a)?;
            let inst = SieveInstance::new(amp, order)?;
            let lhs = corollary_lhs(&inst)?;
            let (rhs, _) = corollary_rhs(&inst, sup_r)?;
            let scale = (n * order + order * order) as f64 * n as f64;
            Ok(SharpnessRow { order, n, lhs, scale, ratio: lhs / scale, envelope: rhs / scale })
        })
        .collect::<Result<_>>()?;
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(SharpnessTable { rows, min_ratio, max_ratio })
}
