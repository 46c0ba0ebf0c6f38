//! Exact rational and integer arithmetic.
//!
//! [`Rational`] wraps a normalized big rational (positive denominator, lowest
//! terms) and serializes as a `"num/den"` string. [`PhaseFraction`] is the
//! exact fractional part of a real number, used as the argument of the
//! period-1 character `e(t) = exp(2 pi i t)` so that no floating point
//! touches a phase before it has been reduced modulo 1.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms. Fails on a zero denominator.
    pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        Self::reduce(num, den).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    /// Nearest `f64`. Exact inputs, one rounding.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying ratio type; use `recip` for a checked path.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer, with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rational::reduce(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact element of `[0, 1)`: the fractional part of some rational.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PhaseFraction(Rational);

impl PhaseFraction {
    /// Fractional part `x - floor(x)`.
    pub fn of(x: &Rational) -> Self {
        let num = x.numer().mod_floor(x.denom());
        PhaseFraction(Rational(BigRational::new(num, x.denom().clone())))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn turns(&self) -> f64 {
        self.0.to_f64()
    }

    /// `e(value) = exp(2 pi i value)`.
    pub fn unit(&self) -> Complex64 {
        unit_of_turns(self.turns())
    }
}

/// `e(t)` for `t` in `[0, 1)`. Shifting to `[-1/2, 1/2)` keeps the argument
/// passed to the trigonometric functions small.
pub fn unit_of_turns(mut t: f64) -> Complex64 {
    if t >= 0.5 {
        t -= 1.0;
    }
    Complex64::cis(std::f64::consts::TAU * t)
}

/// `e(x y)` through the exact residue `(x.num * y) mod x.den`, without
/// normalizing the resulting fraction.
pub fn phase_unit(x: &Rational, y: &BigInt) -> Complex64 {
    let num = (x.numer() * y).mod_floor(x.denom());
    let t = BigRational::new_raw(num, x.denom().clone()).to_f64().unwrap_or(0.0);
    unit_of_turns(t)
}

/// Reduces `num/den` to lowest terms with a positive denominator.
pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    Rational::reduce(num, den)
}

/// `(x * y) mod 1`, computed as `((x.num * y) mod x.den) / x.den`.
pub fn phase_mod1(x: &Rational, y: &BigInt) -> PhaseFraction {
    let num = (x.numer() * y).mod_floor(x.denom());
    PhaseFraction(Rational(BigRational::new(num, x.denom().clone())))
}

/// `(x * y) mod 1` for a rational multiplier.
pub fn phase_mod1_rational(x: &Rational, y: &Rational) -> PhaseFraction {
    PhaseFraction::of(&(x * y))
}

/// `gcd(a, b) == 1`. This agrees with the "(a, b) = 1" convention for
/// lattice problems: one of them is +-1 and the other 0, or both nonzero and coprime.
pub fn coprime(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}

/// Euler's totient for every `n <= limit` by a linear-time sieve.
pub fn totients(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            let mut k = p;
            while k <= limit {
                phi[k] -= phi[k] / p as u64;
                k += p;
            }
        }
    }
    phi
}

/// `sum_{q <= big_q} phi(q)`; equals the number of reduced fractions in `(0, 1]`
/// with denominator at most `big_q`.
pub fn totient_sum(big_q: u64) -> u64 {
    totients(big_q as usize).iter().skip(1).sum()
}

/// Prime factorization by trial division, primes in increasing order.
/// `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // 6k +- 1 wheel
    let mut d = 5u64;
    let mut step = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Ordering helper for comparing a rational against an integer.
pub fn cmp_int(x: &Rational, n: &BigInt) -> Ordering {
    (x.numer()).cmp(&(n * x.denom()))
}
