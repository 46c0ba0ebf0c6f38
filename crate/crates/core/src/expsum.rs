//! Trigonometric sums `f(t) = sum a_i e(t y_i)` and their moments on `[0, 1]`.
//!
//! Every phase `x * y_i` is reduced modulo 1 in exact rational arithmetic
//! before any trigonometric function is called, so the evaluation stays
//! accurate when `x * y_i` is far beyond the range where an `f64` can hold
//! its fractional part.
//!
//! The moments are evaluated combinatorially rather than by quadrature:
//! `int_0^1 |f|^2 = sum_{y_i = y_j} a_i conj(a_j)` and
//! `int_0^1 |f*|^4 = sum_k (sum_{y_i + y_j = k} |a_i| |a_j|)^2`, where `f*`
//! has amplitudes `|a_i|`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{phase_mod1_rational, phase_unit, Rational};
use crate::error::{Error, Result};
use crate::lattice::{quadratic_values, AdditiveProfile};
use crate::report::{factors, rounding_budget, BoundReport};
use crate::summation::{sum, ComplexSum, NeumaierSum};

fn check_aligned(a_len: usize, y_len: usize) -> Result<()> {
    if a_len != y_len {
        return Err(Error::domain(format!("{a_len} amplitudes but {y_len} frequencies")));
    }
    Ok(())
}

/// `f(x) = sum_i a_i e(x y_i)` with exact phase reduction.
pub fn eval_f(a: &[Complex64], y: &[BigInt], x: &Rational) -> Result<Complex64> {
    check_aligned(a.len(), y.len())?;
    let mut acc = ComplexSum::new();
    for (ai, yi) in a.iter().zip(y) {
        acc.add(ai * phase_unit(x, yi));
    }
    Ok(acc.value())
}

/// `sum_i a_i e(x v_i)` for rational `v_i`, again reducing `x v_i` exactly.
pub fn eval_f_rational(a: &[Complex64], v: &[Rational], x: &Rational) -> Result<Complex64> {
    check_aligned(a.len(), v.len())?;
    let mut acc = ComplexSum::new();
    for (ai, vi) in a.iter().zip(v) {
        acc.add(ai * phase_mod1_rational(x, vi).unit());
    }
    Ok(acc.value())
}

/// `sum_{x in X} |f(x)|^2`.
///
/// The values `|f(x)|^2` are computed in parallel and then accumulated in
/// the order of `points`, so reruns are bit-identical.
pub fn sieve_sum(points: &[Rational], a: &[Complex64], y: &[BigInt]) -> Result<f64> {
    check_aligned(a.len(), y.len())?;
    let terms: Vec<f64> = points
        .par_iter()
        .map(|x| eval_f(a, y, x).map(|f| f.norm_sqr()))
        .collect::<Result<_>>()?;
    Ok(sum(terms))
}

/// `sum_{x in X} f(x)`, parallel evaluation and fixed-order accumulation.
pub fn sum_over_points(points: &[Rational], a: &[Complex64], y: &[BigInt]) -> Result<Complex64> {
    check_aligned(a.len(), y.len())?;
    let values: Vec<Complex64> = points.par_iter().map(|x| eval_f(a, y, x)).collect::<Result<_>>()?;
    let mut acc = ComplexSum::new();
    values.into_iter().for_each(|v| acc.add(v));
    Ok(acc.value())
}

/// `int_0^1 |sum a_i e(t y_i)|^2 dt`.
pub fn l2_moment(a: &[Complex64], y: &[BigInt]) -> Result<f64> {
    check_aligned(a.len(), y.len())?;
    let mut groups: BTreeMap<&BigInt, ComplexSum> = BTreeMap::new();
    for (ai, yi) in a.iter().zip(y) {
        groups.entry(yi).or_default().add(*ai);
    }
    Ok(sum(groups.values().map(|g| g.value().norm_sqr())))
}

/// `int_0^1 |sum |a_i| e(t y_i)|^4 dt`.
pub fn l4_moment_abs(a: &[Complex64], y: &[BigInt]) -> Result<f64> {
    check_aligned(a.len(), y.len())?;
    let mags: Vec<f64> = a.iter().map(|z| z.norm()).collect();
    let mut levels: BTreeMap<BigInt, NeumaierSum> = BTreeMap::new();
    for (i, yi) in y.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            levels.entry(yi + yj).or_default().add(mags[i] * mags[j]);
        }
    }
    Ok(sum(levels.values().map(|c| {
        let c = c.value();
        c * c
    })))
}

/// A complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Exact `int_0^1 |f|^2` for rational amplitudes.
pub fn l2_moment_exact(a: &[ExactComplex], y: &[BigInt]) -> Result<Rational> {
    check_aligned(a.len(), y.len())?;
    let mut groups: BTreeMap<&BigInt, ExactComplex> = BTreeMap::new();
    for (ai, yi) in a.iter().zip(y) {
        let g = groups.entry(yi).or_default();
        g.re = &g.re + &ai.re;
        g.im = &g.im + &ai.im;
    }
    Ok(groups.values().fold(Rational::zero(), |acc, g| acc + g.norm_sqr()))
}

/// Exact `int_0^1 |f*|^4` for nonnegative rational magnitudes `|a_i|`.
pub fn l4_moment_abs_exact(mags: &[Rational], y: &[BigInt]) -> Result<Rational> {
    check_aligned(mags.len(), y.len())?;
    if mags.iter().any(Rational::is_negative) {
        return Err(Error::domain("magnitudes must be nonnegative"));
    }
    let mut levels: BTreeMap<BigInt, Rational> = BTreeMap::new();
    for (mi, yi) in mags.iter().zip(y) {
        for (mj, yj) in mags.iter().zip(y) {
            let e = levels.entry(yi + yj).or_default();
            *e = &*e + &(mi * mj);
        }
    }
    Ok(levels.values().fold(Rational::zero(), |acc, c| acc + c * c))
}

/// `sup_k A_Y(k) * ||a||^4`, the bound on the fourth moment of `f*`.
pub fn l4_bound(a: &[Complex64], profile: &AdditiveProfile) -> f64 {
    let n2 = norm_sq(a);
    profile.sup_a as f64 * n2 * n2
}

/// `||a||^2 = sum |a_i|^2`.
pub fn norm_sq(a: &[Complex64]) -> f64 {
    sum(a.iter().map(|z| z.norm_sqr()))
}

/// Fourth moment of `f*` plus the additive-count bound that dominates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub l2: f64,
    pub l4: f64,
    pub sup_a_bound: f64,
}

pub fn moments(a: &[Complex64], y: &[BigInt]) -> Result<MomentReport> {
    let profile = AdditiveProfile::from_values(y)?;
    Ok(MomentReport { l2: l2_moment(a, y)?, l4: l4_moment_abs(a, y)?, sup_a_bound: l4_bound(a, &profile) })
}

/// Fourier transform of the indicator of `[-eps, eps]`:
/// `2 eps sin(2 pi eps t) / (2 pi eps t)`, equal to `2 eps` at `t = 0`.
pub fn phi_hat(eps: f64, t: f64) -> f64 {
    assert!(eps > 0.0, "eps must be positive");
    let u = std::f64::consts::TAU * eps * t;
    if u == 0.0 {
        2.0 * eps
    } else {
        2.0 * eps * u.sin() / u
    }
}

/// Checks `int |f_a|^2 <= int |f_b|^2` for `|a_i| <= b_i`.
pub fn majorisation_check(a: &[Complex64], b: &[f64], y: &[BigInt]) -> Result<BoundReport> {
    check_aligned(a.len(), y.len())?;
    check_aligned(b.len(), y.len())?;
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        if bi.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::precondition(format!("b[{i}] = {bi} is not positive")));
        }
        if ai.norm() > *bi {
            return Err(Error::precondition(format!("|a[{i}]| = {} exceeds b[{i}] = {bi}", ai.norm())));
        }
    }
    let bc: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let lhs = l2_moment(a, y)?;
    let rhs = l2_moment(&bc, y)?;
    let total: f64 = b.iter().sum();
    let budget = rounding_budget(a.len(), total * total);
    Ok(BoundReport::new("majorisation", lhs, rhs, factors([("n", a.len() as f64)]), budget))
}

/// Quadratic amplitude data: `P(T) = c0 T^2 + c1 T + c2` with rational
/// coefficients, the window `(M, M + N]`, and the coefficients `a_i`.
///
/// Normalized so that `c0 > 0`; if the input has `c0 < 0` the polynomial is
/// negated and the amplitudes conjugated, which leaves every `|sum a_i e(x P(i))|`
/// unchanged. `c1 / c0 = p / q` in lowest terms with `q > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticAmplitude {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub p: BigInt,
    pub q: BigInt,
    pub m: BigInt,
    pub n: u64,
    pub a: Vec<Complex64>,
}

impl QuadraticAmplitude {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, m: BigInt, a: Vec<Complex64>) -> Result<Self> {
        if c0.is_zero() {
            return Err(Error::domain("leading coefficient c0 must be nonzero"));
        }
        if a.is_empty() {
            return Err(Error::domain("window length N must be at least 1"));
        }
        let (c0, c1, c2, a) = if c0.is_negative() {
            (-c0, -c1, -c2, a.into_iter().map(|z| z.conj()).collect())
        } else {
            (c0, c1, c2, a)
        };
        let ratio = &c1 / &c0;
        let p = ratio.numer().clone();
        let q = ratio.denom().clone();
        let n = a.len() as u64;
        Ok(QuadraticAmplitude { c0, c1, c2, p, q, m, n, a })
    }

    /// `alpha = c0 / q`, so that `P(T) = alpha (q T^2 + p T) + c2`.
    pub fn alpha(&self) -> Rational {
        &self.c0 / &Rational::from_integer(self.q.clone())
    }

    /// `y_i = q i^2 + p i`, `M < i <= M + N`.
    pub fn frequencies(&self) -> Vec<BigInt> {
        quadratic_values(&self.q, &self.p, &self.m, self.n)
    }

    /// `P(i)` for each index of the window.
    pub fn poly_values(&self) -> Vec<Rational> {
        (1..=self.n)
            .map(|j| {
                let i = Rational::from_integer(&self.m + j);
                (&self.c0 * &i + &self.c1) * &i + &self.c2
            })
            .collect()
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.a)
    }

    pub fn abs_m(&self) -> BigInt {
        self.m.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::farey;
    use num_traits::Zero;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ys(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&y| BigInt::from(y)).collect()
    }

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn eval_examples() {
        let f = eval_f(&ones(2), &ys(&[1, 4]), &Rational::new(1, 2)).unwrap();
        assert!(f.norm() < 1e-15);
        let f = eval_f(&ones(2), &ys(&[1, 4]), &Rational::new(1, 3)).unwrap();
        assert!(close(f.norm(), 2.0, 1e-15));
        let expect = 2.0 * Complex64::cis(2.0 * PI / 3.0);
        assert!((f - expect).norm() < 1e-14);
        let a = vec![Complex64::new(0.5, -1.0), Complex64::new(2.0, 3.0)];
        let f = eval_f(&a, &ys(&[0, 0]), &Rational::new(7, 9)).unwrap();
        assert_eq!(f, a[0] + a[1]);
        assert!(eval_f(&ones(2), &ys(&[1]), &Rational::one()).is_err());
    }

    #[test]
    fn sieve_sum_examples() {
        let f3 = farey(3).unwrap();
        let s = sieve_sum(f3.fractions(), &ones(2), &ys(&[1, 4])).unwrap();
        assert!(close(s, 8.0, 1e-14));
        let zero = vec![Complex64::zero(); 2];
        assert_eq!(sieve_sum(f3.fractions(), &zero, &ys(&[1, 4])).unwrap(), 0.0);
        let s = sieve_sum(&[Rational::new(1, 2)], &ones(3), &ys(&[0, 2, 4])).unwrap();
        assert!(close(s, 9.0, 1e-15));
    }

    #[test]
    fn sieve_sum_order_invariance() {
        let pts = farey(17).unwrap().fractions().to_vec();
        let a: Vec<Complex64> = (0..9).map(|k| Complex64::new(k as f64 * 0.3 - 1.0, 0.7 - k as f64 * 0.11)).collect();
        let y = ys(&[3, -8, 40, 41, 1000, 17, 0, 12345, 99]);
        let s1 = sieve_sum(&pts, &a, &y).unwrap();
        assert_eq!(s1.to_bits(), sieve_sum(&pts, &a, &y).unwrap().to_bits());
        let mut rev = pts.clone();
        rev.reverse();
        assert!(close(s1, sieve_sum(&rev, &a, &y).unwrap(), 1e-13));
    }

    #[test]
    fn moment_examples() {
        assert_eq!(l2_moment(&ones(2), &ys(&[1, 4])).unwrap(), 2.0);
        assert_eq!(l2_moment(&ones(2), &ys(&[3, 3])).unwrap(), 4.0);
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(close(l2_moment(&a, &ys(&[3, 3])).unwrap(), 2.0, 1e-15));

        let y = ys(&[1, 4]);
        assert_eq!(l4_moment_abs(&ones(2), &y).unwrap(), 6.0);
        assert_eq!(l4_bound(&ones(2), &AdditiveProfile::from_values(&y).unwrap()), 8.0);
        assert_eq!(l4_moment_abs(&ones(1), &ys(&[7])).unwrap(), 1.0);
        assert_eq!(l4_moment_abs(&ones(3), &ys(&[0, 0, 0])).unwrap(), 81.0);
    }

    #[test]
    fn exact_moments() {
        let r = |n, d| Rational::new(n, d);
        let a = vec![ExactComplex::new(r(1, 1), r(0, 1)), ExactComplex::new(r(0, 1), r(1, 1))];
        assert_eq!(l2_moment_exact(&a, &ys(&[3, 3])).unwrap(), r(2, 1));
        let mags = vec![r(1, 1), r(1, 1)];
        assert_eq!(l4_moment_abs_exact(&mags, &ys(&[1, 4])).unwrap(), r(6, 1));
        assert!(l4_moment_abs_exact(&[r(-1, 1)], &ys(&[0])).is_err());
    }

    #[test]
    fn phi_hat_boundaries() {
        assert_eq!(phi_hat(0.25, 0.0), 0.5);
        assert!(close(1.0 / phi_hat(0.25, 0.0), 1.0 / (2.0 * 0.25), 1e-15));
        assert!(close(phi_hat(0.25, 1.0), 1.0 / PI, 1e-15));
        assert!(close(1.0 / phi_hat(0.25, 1.0), PI / (4.0 * 0.25), 1e-15));
    }

    #[test]
    fn phi_hat_sandwich_on_grid() {
        let eps = 0.125;
        let tmax = 0.25 / eps;
        for k in 0..=1000 {
            let t = -tmax + 2.0 * tmax * k as f64 / 1000.0;
            let inv = 1.0 / phi_hat(eps, t);
            assert!(inv >= 1.0 / (2.0 * eps) * (1.0 - 1e-15), "t = {t}");
            assert!(inv <= PI / (4.0 * eps) * (1.0 + 1e-15), "t = {t}");
        }
    }

    #[test]
    fn majorisation_examples() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let rep = majorisation_check(&a, &[1.0, 1.0], &ys(&[3, 3])).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (0.0, 4.0));
        assert!(rep.passed());
        let rep = majorisation_check(&ones(2), &[1.0, 1.0], &ys(&[3, 3])).unwrap();
        assert_eq!(rep.lhs, rep.rhs);
        assert!(majorisation_check(&ones(2), &[1.0, 0.5], &ys(&[3, 3])).is_err());
        assert!(majorisation_check(&ones(1), &[0.0], &ys(&[3])).is_err());
    }

    #[test]
    fn exact_phase_survives_huge_products() {
        // x y = 10^18 + 1/3: the f64 product has no fractional part left
        let x = Rational::new(1, 3);
        let y = BigInt::from(3_000_000_000_000_000_001i128);
        let f = eval_f(&ones(1), std::slice::from_ref(&y), &x).unwrap();
        assert!((f - Complex64::cis(2.0 * PI / 3.0)).norm() < 1e-15);
        let naive = Complex64::cis(2.0 * PI * (1.0 / 3.0) * 3.0e18);
        assert!((naive - f).norm() > 1e-3);
    }

    #[test]
    fn amplitude_normalization() {
        let a = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)];
        let amp = QuadraticAmplitude::new(Rational::new(-3, 2), Rational::new(1, 2), Rational::new(1, 7), BigInt::from(4), a.clone()).unwrap();
        assert_eq!(amp.c0, Rational::new(3, 2));
        assert_eq!((amp.p.clone(), amp.q.clone()), (BigInt::from(-1), BigInt::from(3)));
        assert_eq!(amp.alpha(), Rational::new(1, 2));
        assert_eq!(amp.a[0], a[0].conj());
        assert_eq!(amp.frequencies(), ys(&[3 * 25 - 5, 3 * 36 - 6]));
        assert!(QuadraticAmplitude::new(Rational::zero(), Rational::one(), Rational::one(), BigInt::zero(), a).is_err());
        assert!(QuadraticAmplitude::new(Rational::one(), Rational::one(), Rational::one(), BigInt::zero(), vec![]).is_err());
    }

    proptest! {
        #[test]
        fn exact_path_matches_naive_for_moderate_phases(
            num in 1i64..200, den in 1i64..200,
            y in proptest::collection::vec(-5000i64..5000, 1..20),
            seed in any::<u64>(),
        ) {
            let x = Rational::new(num, den);
            let a: Vec<Complex64> = (0..y.len()).map(|k| Complex64::new(((seed >> (k % 60)) & 7) as f64 - 3.5, 1.0)).collect();
            let exact = eval_f(&a, &ys(&y), &x).unwrap();
            let xf = num as f64 / den as f64;
            let naive: Complex64 = a.iter().zip(&y).map(|(ai, &yi)| ai * Complex64::cis(2.0 * PI * xf * yi as f64)).sum();
            let scale: f64 = a.iter().map(|z| z.norm()).sum();
            prop_assert!((exact - naive).norm() <= 1e-9 * scale);
        }

        #[test]
        fn majorisation_holds(
            y in proptest::collection::vec(-6i64..6, 1..=20),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let b: Vec<f64> = y.iter().map(|_| rng.gen_range(0.01..2.0)).collect();
            let a: Vec<Complex64> = b.iter().map(|&bi| Complex64::from_polar(bi * rng.gen_range(0.0..=1.0), rng.gen_range(0.0..6.3))).collect();
            let rep = majorisation_check(&a, &b, &ys(&y)).unwrap();
            prop_assert!(rep.passed());
        }

        #[test]
        fn l4_bounded_by_additive_count(
            y in proptest::collection::vec(-50i64..50, 1..=25),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<Complex64> = y.iter().map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let y = ys(&y);
            let m = moments(&a, &y).unwrap();
            prop_assert!(m.l4 <= m.sup_a_bound * (1.0 + 1e-12));
            prop_assert!(m.l2 >= 0.0);
        }
    }
}
