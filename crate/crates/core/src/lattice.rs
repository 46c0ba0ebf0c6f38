//! Integer points on circles, sums of two squares, and additive counts of
//! quadratic sequences.
//!
//! The circles studied are `(c1 X - c2)^2 + (c1 Y - m c2)^2 = c3` with integer
//! `c1 != 0`, `c2`, `c3` and rational `m`. When such a circle carries at least
//! three integer points in the box `|x|, |y| <= H` and `gcd(c1, c2) = 1`, the
//! coefficients are bounded polynomially in `H`; with `m = 1` this caps the
//! number of box points by `sup_{n <= 144 H^4} r(n)`, and through completing
//! the square it caps the additive counts `A_Y(k)` of `y_i = q i^2 + p i`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{coprime, exact_sqrt, factorize, Rational};
use crate::error::{Error, Result};

/// Number of integer pairs `(x, y)` with `x^2 + y^2 = n`, from the
/// factorization: `4 * prod_{p = 1 mod 4} (e_p + 1)` when every prime
/// `p = 3 mod 4` divides `n` to an even power, else 0.
pub fn r(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut count = 4;
    for (p, e) in factorize(n) {
        match p % 4 {
            1 => count *= u64::from(e) + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    count
}

/// Table of `r(n)` for `0 <= n <= limit` with running maxima, built from the
/// divisor-character identity `r(n) = 4 (d_1(n) - d_3(n))`.
#[derive(Debug, Clone)]
pub struct SupR {
    r: Vec<u32>,
    // (max of r over 1..=n, smallest argmax)
    running: Vec<(u32, u32)>,
}

/// Default ceiling for exhaustive `sup r` tables.
pub const DEFAULT_SUP_R_LIMIT: u64 = 3_000_000;

impl SupR {
    pub fn new(limit: u64) -> Self {
        assert!(limit <= u32::MAX as u64, "sup r table limit too large");
        let limit = limit as usize;
        let mut chi_sum = vec![0i32; limit + 1];
        let mut d = 1;
        while d <= limit {
            let sign = if d % 4 == 1 { 1 } else { -1 };
            let mut k = d;
            while k <= limit {
                chi_sum[k] += sign;
                k += d;
            }
            d += 2;
        }
        let mut r: Vec<u32> = chi_sum.iter().map(|&s| 4 * s as u32).collect();
        r[0] = 1;
        let mut running = vec![(0u32, 0u32); limit + 1];
        let mut best = (0u32, 0u32);
        for n in 1..=limit {
            if r[n] > best.0 {
                best = (r[n], n as u32);
            }
            running[n] = best;
        }
        SupR { r, running }
    }

    pub fn limit(&self) -> u64 {
        (self.r.len() - 1) as u64
    }

    pub fn r(&self, n: u64) -> Option<u64> {
        self.r.get(n as usize).map(|&v| u64::from(v))
    }

    /// `(sup_{1 <= n <= bound} r(n), smallest n attaining it)`.
    pub fn sup_with_argmax(&self, bound: u64) -> Result<(u64, u64)> {
        if bound == 0 {
            return Err(Error::domain("sup r needs a bound of at least 1"));
        }
        let (v, n) = *self.running.get(bound as usize).ok_or(Error::Uncomputable { needed: bound, limit: self.limit() })?;
        Ok((u64::from(v), u64::from(n)))
    }

    pub fn sup(&self, bound: u64) -> Result<u64> {
        self.sup_with_argmax(bound).map(|(v, _)| v)
    }

    /// `sup_{1 <= n <= 144 N^4} r(n)`, the lattice factor for windows of length `N`.
    pub fn sup_for_window(&self, n: u64) -> Result<u64> {
        let bound = window_bound(n)?;
        self.sup(bound)
    }
}

/// `144 N^4`, or an error when it does not fit in 64 bits.
pub fn window_bound(n: u64) -> Result<u64> {
    144u64
        .checked_mul(n.checked_pow(4).ok_or(Error::Uncomputable { needed: u64::MAX, limit: 0 })?)
        .ok_or(Error::Uncomputable { needed: u64::MAX, limit: 0 })
}

/// `ceil(144 H^4)` for a rational `H`.
pub fn box_bound(h: &Rational) -> Result<u64> {
    let h4 = {
        let h2 = h * h;
        &h2 * &h2
    };
    (Rational::from_integer(144) * h4)
        .ceil()
        .to_u64()
        .ok_or(Error::Uncomputable { needed: u64::MAX, limit: 0 })
}

/// `sup_{1 <= n <= bound} r(n)` by exhaustive scan.
pub fn sup_r(bound: u64) -> Result<u64> {
    if bound > DEFAULT_SUP_R_LIMIT {
        return Err(Error::Uncomputable { needed: bound, limit: DEFAULT_SUP_R_LIMIT });
    }
    SupR::new(bound.max(1)).sup(bound)
}

/// A circle `(c1 X - c2)^2 + (c1 Y - m c2)^2 = c3` and a box half-width `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirclePointProblem {
    pub c1: BigInt,
    pub c2: BigInt,
    pub c3: BigInt,
    pub m: Rational,
    #[serde(rename = "H")]
    pub h: Rational,
}

impl CirclePointProblem {
    pub fn new(c1: impl Into<BigInt>, c2: impl Into<BigInt>, c3: impl Into<BigInt>, m: Rational, h: Rational) -> Result<Self> {
        let p = CirclePointProblem { c1: c1.into(), c2: c2.into(), c3: c3.into(), m, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c1.is_zero() {
            return Err(Error::domain("c1 must be nonzero"));
        }
        if self.h < Rational::one() {
            return Err(Error::domain(format!("H must be at least 1, got {}", self.h)));
        }
        if self.h.floor() > BigInt::from(1_000_000_000i64) {
            return Err(Error::domain("H too large for enumeration"));
        }
        Ok(())
    }

    fn half_width(&self) -> i64 {
        self.h.floor().to_i64().expect("validated")
    }
}

/// All integer points of the box `|x|, |y| <= H` on the circle, sorted.
/// A negative `c3` gives the empty set.
///
/// With `m = p/q`, the equation is scaled by `q^2` and each column `x` is
/// solved for `y` by an exact square-root test.
pub fn circle_points(prob: &CirclePointProblem) -> Vec<(i64, i64)> {
    let q = prob.m.denom();
    let p = prob.m.numer();
    let qc1 = q * &prob.c1;
    let pc2 = p * &prob.c2;
    let rhs = q * q * &prob.c3;
    let h = prob.half_width();
    let mut out = Vec::new();
    for x in -h..=h {
        let u = q * (&prob.c1 * x - &prob.c2);
        let rem = &rhs - &u * &u;
        let Some(s) = exact_sqrt(&rem) else { continue };
        // q c1 y - p c2 = +-s
        let mut ys: Vec<i64> = [&pc2 + &s, &pc2 - &s]
            .into_iter()
            .filter_map(|t| {
                let (y, rest) = t.div_rem(&qc1);
                (rest.is_zero()).then_some(y)
            })
            .filter_map(|y| y.to_i64())
            .filter(|y| y.abs() <= h)
            .collect();
        ys.sort_unstable();
        ys.dedup();
        out.extend(ys.into_iter().map(|y| (x, y)));
    }
    out
}

/// Divides `(c1, c2, c3)` by `d = gcd(c1, c2)` (`d^2` from `c3`) so that the
/// reduced pair is coprime. Returns `None` when `d^2` does not divide `c3`,
/// in which case the `m = 1` circle has no integer points at all.
pub fn normalize_circle(c1: &BigInt, c2: &BigInt, c3: &BigInt) -> Option<(BigInt, BigInt, BigInt)> {
    let d = c1.gcd(c2);
    let d2 = &d * &d;
    let (c3s, rest) = c3.div_rem(&d2);
    if !rest.is_zero() {
        return None;
    }
    Some((c1 / &d, c2 / &d, c3s))
}

/// One coefficient bound: `value <= limit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientBound {
    pub value: Rational,
    pub limit: Rational,
    pub holds: bool,
}

impl CoefficientBound {
    fn new(value: Rational, limit: Rational) -> Self {
        let holds = value <= limit;
        CoefficientBound { value, limit, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Bounds {
    pub c1: CoefficientBound,
    pub c2: CoefficientBound,
    pub c3: CoefficientBound,
}

/// Outcome of checking the three-point coefficient bounds on one circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub points: Vec<(i64, i64)>,
    pub bounds: Prop1Bounds,
    /// `gcd(c1, c2) = 1`; the bounds are only claimed in that case.
    pub coprime: bool,
    pub pass: bool,
}

/// Checks `|c1| <= 4q(1+|m|)H`, `|c2| <= 2qH^2`, `c3 <= 36 q^2 (1+|m|)^2 H^4`.
///
/// Fails with a precondition error when the box holds fewer than three points.
pub fn check_prop1_bounds(prob: &CirclePointProblem) -> Result<Prop1Report> {
    prob.validate()?;
    let points = circle_points(prob);
    if points.len() < 3 {
        return Err(Error::precondition(format!(
            "need at least three box points on the circle, found {}",
            points.len()
        )));
    }
    let q = Rational::from_integer(prob.m.denom().clone());
    let h = &prob.h;
    let h2 = h * h;
    let one_m = Rational::one() + prob.m.abs();
    let lim1 = Rational::from_integer(4) * &q * &one_m * h;
    let lim2 = Rational::from_integer(2) * &q * &h2;
    let lim3 = Rational::from_integer(36) * &q * &q * &one_m * &one_m * &h2 * &h2;
    let bounds = Prop1Bounds {
        c1: CoefficientBound::new(Rational::from_integer(prob.c1.abs()), lim1),
        c2: CoefficientBound::new(Rational::from_integer(prob.c2.abs()), lim2),
        c3: CoefficientBound::new(Rational::from_integer(prob.c3.clone()), lim3),
    };
    let is_coprime = coprime(&prob.c1, &prob.c2);
    let pass = !is_coprime || (bounds.c1.holds && bounds.c2.holds && bounds.c3.holds);
    Ok(Prop1Report { points, bounds, coprime: is_coprime, pass })
}

/// `a0 T^2 + a1 T + a2` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntQuadratic {
    pub a0: BigInt,
    pub a1: BigInt,
    pub a2: BigInt,
}

impl IntQuadratic {
    pub fn new(a0: impl Into<BigInt>, a1: impl Into<BigInt>, a2: impl Into<BigInt>) -> Result<Self> {
        let a0 = a0.into();
        if a0.is_zero() {
            return Err(Error::domain("leading coefficient must be nonzero"));
        }
        Ok(IntQuadratic { a0, a1: a1.into(), a2: a2.into() })
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        (&self.a0 * t + &self.a1) * t + &self.a2
    }
}

/// Closed real interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if hi < lo {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Integers in the interval, ascending.
    pub fn integers(&self) -> impl Iterator<Item = BigInt> {
        let lo = self.lo.ceil();
        let hi = self.hi.floor();
        num_iter_range(lo, hi)
    }
}

fn num_iter_range(lo: BigInt, hi: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = lo;
    std::iter::from_fn(move || {
        if cur > hi {
            return None;
        }
        let v = cur.clone();
        cur += 1;
        Some(v)
    })
}

/// Number of integer points `(x, y)` in `I x I` with `P(x) + P(y) = k`.
///
/// Requires `length(I) >= 1`. Each column `x` is solved for `y` through the
/// discriminant, so the cost is linear in the length.
pub fn quadratic_level_count(poly: &IntQuadratic, interval: &ClosedInterval, k: &BigInt) -> Result<u64> {
    if interval.length() < Rational::one() {
        return Err(Error::domain("interval length must be at least 1"));
    }
    if interval.length() > Rational::from_integer(10_000_000) {
        return Err(Error::domain("interval too long for enumeration"));
    }
    let two_a0 = BigInt::from(2) * &poly.a0;
    let mut count = 0u64;
    for x in interval.integers() {
        // a0 y^2 + a1 y + (a2 + P(x) - k) = 0
        let c = &poly.a2 + poly.eval(&x) - k;
        let disc = &poly.a1 * &poly.a1 - BigInt::from(4) * &poly.a0 * c;
        let Some(s) = exact_sqrt(&disc) else { continue };
        let mut roots: Vec<BigInt> = [-&poly.a1 + &s, -&poly.a1 - &s]
            .into_iter()
            .filter_map(|num| {
                let (y, rest) = num.div_rem(&two_a0);
                rest.is_zero().then_some(y)
            })
            .filter(|y| {
                let y = Rational::from_integer(y.clone());
                y >= interval.lo && y <= interval.hi
            })
            .collect();
        roots.sort();
        roots.dedup();
        count += roots.len() as u64;
    }
    Ok(count)
}

/// Completing the square about an integer `x0`: `P(x) + P(y) = k` becomes
/// `(c1 X - c2)^2 + (c1 Y - c2)^2 = c3` in `X = x - x0`, `Y = y - x0` with
/// `c1 = 2 a0`, `c2 = -(2 a0 x0 + a1)`, `c3 = 4 a0 (k - 2 a2) + 2 a1^2`.
pub fn complete_square(poly: &IntQuadratic, x0: &BigInt, k: &BigInt) -> (BigInt, BigInt, BigInt) {
    let two = BigInt::from(2);
    let c1 = &two * &poly.a0;
    let c2 = -(&c1 * x0 + &poly.a1);
    let c3 = BigInt::from(4) * &poly.a0 * (k - &two * &poly.a2) + &two * &poly.a1 * &poly.a1;
    (c1, c2, c3)
}

/// Longest sequence whose additive profile is tabulated; the count visits every ordered pair.
pub const MAX_PROFILE_LEN: usize = 4096;

/// Additive structure of an integer sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveProfile {
    /// `k -> A_Y(k)`, the number of ordered index pairs with `y_i + y_j = k`.
    pub counts: BTreeMap<BigInt, u64>,
    pub sup_a: u64,
    /// `max y - min y`.
    pub diameter: BigInt,
}

impl AdditiveProfile {
    pub fn from_values(ys: &[BigInt]) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::domain("empty sequence"));
        }
        if ys.len() > MAX_PROFILE_LEN {
            return Err(Error::domain(format!("{} values exceed the pair-count limit of {MAX_PROFILE_LEN}", ys.len())));
        }
        let mut counts = BTreeMap::new();
        for yi in ys {
            for yj in ys {
                *counts.entry(yi + yj).or_insert(0u64) += 1;
            }
        }
        let sup_a = counts.values().copied().max().unwrap_or(0);
        let lo = ys.iter().min().expect("nonempty");
        let hi = ys.iter().max().expect("nonempty");
        Ok(AdditiveProfile { counts, sup_a, diameter: hi - lo })
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// `y_i = q i^2 + p i` for the integers `i` in `(M, M + N]`.
pub fn quadratic_values(q: &BigInt, p: &BigInt, m: &BigInt, n: u64) -> Vec<BigInt> {
    (1..=n)
        .map(|j| {
            let i = m + j;
            (q * &i + p) * &i
        })
        .collect()
}

fn check_window(q: &BigInt, p: &BigInt, n: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("window length N must be at least 1"));
    }
    if n > MAX_PROFILE_LEN as u64 {
        return Err(Error::domain(format!("window length N = {n} exceeds {MAX_PROFILE_LEN}")));
    }
    if !q.is_positive() {
        return Err(Error::domain("q must be positive"));
    }
    if !coprime(p, q) {
        return Err(Error::domain(format!("p = {p} and q = {q} are not coprime")));
    }
    Ok(())
}

/// Additive profile of `y_i = q i^2 + p i`, `M < i <= M + N`.
pub fn additive_profile(q: &BigInt, p: &BigInt, m: &BigInt, n: u64) -> Result<AdditiveProfile> {
    check_window(q, p, n)?;
    AdditiveProfile::from_values(&quadratic_values(q, p, m, n))
}

/// `qN(|M| + 2N + |p/q| + 1)`. This does not bound the diameter in general:
/// for `N >= 3` and large `|M|` the true diameter is about `2 q N |M|`.
pub fn proof_delta_bound(q: &BigInt, p: &BigInt, m: &BigInt, n: u64) -> Rational {
    let q_r = Rational::from_integer(q.clone());
    let n_r = Rational::from_integer(n as i64);
    let inner = Rational::from_integer(m.abs()) + Rational::from_integer(2 * n as i64)
        + Rational::reduce(p.abs(), q.clone()).expect("q > 0")
        + Rational::one();
    q_r * n_r * inner
}

/// `(N - 1)(q (2|M| + 2N) + |p|)`, a valid upper bound on the diameter of
/// `q i^2 + p i` over `(M, M + N]`: `y_i - y_j = (i - j)(q (i + j) + p)`.
pub fn diameter_bound(q: &BigInt, p: &BigInt, m: &BigInt, n: u64) -> BigInt {
    let n = BigInt::from(n);
    (&n - 1u32) * (q * (BigInt::from(2) * m.abs() + BigInt::from(2) * &n) + p.abs())
}
