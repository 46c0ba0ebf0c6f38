//! Farey sequences and delta-spaced sets.
//!
//! The Farey sequence of order `Q` here is the open-interval version: every
//! reduced fraction strictly between 0 and 1 whose denominator is at most `Q`.
//! Consecutive terms `a/b < c/d` satisfy `bc - ad = 1`, so each gap is
//! `1/(bd) >= 1/Q^2`, which is what certifies the spacing of a scaled
//! sequence.

use std::convert::TryFrom;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Streaming generator of the terms of the Farey sequence of order `Q`
/// as `(numerator, denominator)` pairs, by the next-term recurrence.
///
/// Starts after `0/1` and stops before `1/1`.
#[derive(Debug, Clone)]
pub struct FareyPairs {
    order: u64,
    prev: (u64, u64),
    cur: (u64, u64),
}

impl FareyPairs {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1, "Farey order must be at least 1");
        FareyPairs { order, prev: (0, 1), cur: (1, order) }
    }
}

impl Iterator for FareyPairs {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        let (c, d) = self.cur;
        if c >= d {
            return None;
        }
        let (a, b) = self.prev;
        let k = (self.order + b) / d;
        self.prev = self.cur;
        self.cur = (k * c - a, k * d - b);
        Some((c, d))
    }
}

/// The complete, sorted Farey sequence of order `Q` in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySequence {
    order: u64,
    fractions: Vec<Rational>,
}

/// Generates the Farey sequence of order `order`. Orders below 2 have no
/// interior points and are rejected.
pub fn farey(order: u64) -> Result<FareySequence> {
    if order <= 1 {
        return Err(Error::EmptyFarey(order));
    }
    let fractions = FareyPairs::new(order)
        .map(|(a, b)| Rational::reduce(a, b).expect("positive denominator"))
        .collect();
    Ok(FareySequence { order, fractions })
}

impl FareySequence {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn fractions(&self) -> &[Rational] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    /// The set `alpha * F(Q)` with certified spacing `alpha / Q^2` and
    /// enclosure `[-alpha, alpha]`.
    ///
    /// Fails when the sequence has a single point (order 2), since a spaced
    /// set needs at least two.
    pub fn as_spaced_set(&self, alpha: &Rational) -> Result<SpacedSet> {
        if !alpha.is_positive() {
            return Err(Error::domain(format!("scale must be positive, got {alpha}")));
        }
        let q2 = Rational::from_integer(BigInt::from(self.order) * BigInt::from(self.order));
        let delta = alpha / &q2;
        let points = self.fractions.iter().map(|f| alpha * f).collect();
        SpacedSet::new(points, delta, alpha.clone())
    }
}

impl Serialize for FareySequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.fractions.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FareySequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let fractions = Vec::<Rational>::deserialize(deserializer)?;
        FareySequence::try_from(fractions).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<Rational>> for FareySequence {
    type Error = Error;

    /// Accepts a list only if it is exactly the Farey sequence of the order
    /// given by its largest denominator.
    fn try_from(fractions: Vec<Rational>) -> Result<Self> {
        let max_den = fractions
            .iter()
            .map(|f| f.denom().clone())
            .max()
            .ok_or_else(|| Error::Input("empty Farey sequence".into()))?;
        let order: u64 = u64::try_from(&max_den)
            .ok()
            .filter(|&q| q >= 2 && (q as u128) * (q as u128) <= 4 * fractions.len() as u128 + 16)
            .ok_or_else(|| Error::Input("fraction list is not a Farey sequence".into()))?;
        let expected = farey(order)?;
        if expected.fractions != fractions {
            return Err(Error::Input(format!("fraction list is not the Farey sequence of order {order}")));
        }
        Ok(expected)
    }
}

/// A finite, strictly increasing set of rationals with a certified lower
/// bound `delta` on consecutive gaps, contained in `[-enclosure, enclosure]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpacedSetRepr", into = "SpacedSetRepr")]
pub struct SpacedSet {
    points: Vec<Rational>,
    delta: Rational,
    enclosure: Rational,
}

#[derive(Serialize, Deserialize)]
struct SpacedSetRepr {
    points: Vec<Rational>,
    delta: Rational,
    enclosure: Rational,
}

impl TryFrom<SpacedSetRepr> for SpacedSet {
    type Error = Error;
    fn try_from(r: SpacedSetRepr) -> Result<Self> {
        SpacedSet::new(r.points, r.delta, r.enclosure)
    }
}

impl From<SpacedSet> for SpacedSetRepr {
    fn from(s: SpacedSet) -> Self {
        SpacedSetRepr { points: s.points, delta: s.delta, enclosure: s.enclosure }
    }
}

impl SpacedSet {
    /// Validates and builds a spaced set. `points` must already be sorted.
    pub fn new(points: Vec<Rational>, delta: Rational, enclosure: Rational) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSpacedSet(m));
        if points.len() < 2 {
            return bad(format!("need at least two points, got {}", points.len()));
        }
        if !delta.is_positive() {
            return bad(format!("delta must be positive, got {delta}"));
        }
        for w in points.windows(2) {
            if w[1] <= w[0] {
                return bad(format!("points not strictly increasing at {} -> {}", w[0], w[1]));
            }
            if &w[1] - &w[0] < delta {
                return bad(format!("gap {} -> {} is below delta {delta}", w[0], w[1]));
            }
        }
        let neg = -&enclosure;
        if points[0] < neg || points[points.len() - 1] > enclosure {
            return bad(format!("points leave [-{enclosure}, {enclosure}]"));
        }
        Ok(SpacedSet { points, delta, enclosure })
    }

    /// Sorts and deduplicates `points`, then certifies the exact minimum gap
    /// and the smallest symmetric enclosure.
    pub fn from_points(mut points: Vec<Rational>) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.len() < 2 {
            return Err(Error::InvalidSpacedSet(format!("need at least two distinct points, got {}", points.len())));
        }
        let delta = min_gap(&points).expect("two points");
        let enclosure = points[0].abs().max(points[points.len() - 1].abs());
        SpacedSet::new(points, delta, enclosure)
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn enclosure(&self) -> &Rational {
        &self.enclosure
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `S(eps, x)`: how many points lie within `eps` of the member `x`.
    pub fn neighbor_count(&self, eps: &Rational, x: &Rational) -> Result<usize> {
        if !eps.is_positive() {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        if self.points.binary_search(x).is_err() {
            return Err(Error::domain(format!("{x} is not a point of the set")));
        }
        let lo = x - eps;
        let hi = x + eps;
        let start = self.points.partition_point(|p| *p < lo);
        let end = self.points.partition_point(|p| *p <= hi);
        Ok(end - start)
    }

    /// The spacing bound `1 + 2 eps / delta` on every neighbor count.
    pub fn neighbor_bound(&self, eps: &Rational) -> Rational {
        Rational::one() + Rational::from_integer(2) * eps / &self.delta
    }
}

/// Minimum difference between consecutive elements of a sorted slice.
pub fn min_gap(sorted: &[Rational]) -> Option<Rational> {
    sorted.windows(2).map(|w| &w[1] - &w[0]).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::totient_sum;
    use num_integer::Integer;

    fn strs(f: &FareySequence) -> Vec<String> {
        f.fractions().iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn small_orders() {
        assert_eq!(strs(&farey(3).unwrap()), ["1/3", "1/2", "2/3"]);
        assert_eq!(strs(&farey(4).unwrap()), ["1/4", "1/3", "1/2", "2/3", "3/4"]);
        assert_eq!(strs(&farey(2).unwrap()), ["1/2"]);
        assert_eq!(farey(100).unwrap().len(), 3043);
    }

    #[test]
    fn order_one_is_an_error() {
        assert_eq!(farey(1), Err(Error::EmptyFarey(1)));
        assert_eq!(farey(0), Err(Error::EmptyFarey(0)));
    }

    #[test]
    fn matches_sorted_enumeration() {
        for q in 2..=40u64 {
            let mut brute: Vec<Rational> = (2..=q)
                .flat_map(|b| (1..b).filter(move |a| a.gcd(&b) == 1).map(move |a| Rational::new(a as i64, b as i64)))
                .collect();
            brute.sort();
            assert_eq!(farey(q).unwrap().fractions(), &brute[..], "Q = {q}");
        }
    }

    #[test]
    fn adjacency_and_cardinality() {
        for q in 2..=300u64 {
            let pairs: Vec<_> = FareyPairs::new(q).collect();
            assert_eq!(pairs.len() as u64, totient_sum(q) - 1);
            assert!(pairs.len() as u64 <= q * q);
            for w in pairs.windows(2) {
                let ((a, b), (c, d)) = (w[0], w[1]);
                assert_eq!(b * c - a * d, 1);
            }
        }
    }

    #[test]
    fn scaled_spacing() {
        let f3 = farey(3).unwrap();
        let x = f3.as_spaced_set(&Rational::one()).unwrap();
        assert_eq!(x.delta(), &Rational::new(1, 9));
        assert_eq!(x.enclosure(), &Rational::one());
        assert_eq!(min_gap(x.points()).unwrap(), Rational::new(1, 6));

        let y = farey(5).unwrap().as_spaced_set(&Rational::new(2, 3)).unwrap();
        assert_eq!(y.delta(), &Rational::new(2, 75));
        assert_eq!(y.enclosure(), &Rational::new(2, 3));

        assert!(farey(2).unwrap().as_spaced_set(&Rational::one()).is_err());
        assert!(f3.as_spaced_set(&Rational::new(-1, 2)).is_err());
    }

    #[test]
    fn certified_delta_never_exceeds_true_gap() {
        for q in 3..=60u64 {
            for alpha in [Rational::new(1, 1), Rational::new(7, 3), Rational::new(1, 11)] {
                let x = farey(q).unwrap().as_spaced_set(&alpha).unwrap();
                assert!(min_gap(x.points()).unwrap() >= *x.delta());
            }
        }
    }

    #[test]
    fn neighbor_counts() {
        let x = SpacedSet::new(vec![Rational::zero(), Rational::new(1, 2), Rational::one()], Rational::new(1, 2), Rational::one()).unwrap();
        let eps = Rational::new(1, 2);
        assert_eq!(x.neighbor_count(&eps, &Rational::new(1, 2)).unwrap(), 3);
        assert_eq!(x.neighbor_bound(&eps), Rational::from_integer(3));
        assert_eq!(x.neighbor_count(&Rational::new(1, 4), &Rational::zero()).unwrap(), 1);
        assert!(x.neighbor_count(&eps, &Rational::new(1, 3)).is_err());
        assert!(x.neighbor_count(&Rational::zero(), &Rational::zero()).is_err());
    }

    #[test]
    fn neighbor_bound_exhaustive_f10() {
        let f = farey(10).unwrap();
        let pts = f.fractions().to_vec();
        let x = SpacedSet::new(pts.clone(), Rational::new(1, 100), Rational::one()).unwrap();
        let eps = Rational::new(1, 100);
        let bound = x.neighbor_bound(&eps);
        for p in &pts {
            let brute = pts.iter().filter(|q| (*q - p).abs() <= eps).count();
            let s = x.neighbor_count(&eps, p).unwrap();
            assert_eq!(s, brute);
            assert!(Rational::from_integer(s as i64) <= bound);
        }
    }

    #[test]
    fn neighbor_bound_on_eps_grid() {
        let x = farey(25).unwrap().as_spaced_set(&Rational::new(3, 2)).unwrap();
        for k in 1..=40 {
            let eps = Rational::new(k, 400);
            let bound = x.neighbor_bound(&eps);
            for p in x.points() {
                let s = x.neighbor_count(&eps, p).unwrap();
                assert!(Rational::from_integer(s as i64) <= bound);
            }
        }
    }

    #[test]
    fn spaced_set_validation() {
        let r = |n, d| Rational::new(n, d);
        assert!(SpacedSet::new(vec![r(0, 1)], r(1, 2), r(1, 1)).is_err());
        assert!(SpacedSet::new(vec![r(1, 2), r(0, 1)], r(1, 2), r(1, 1)).is_err());
        assert!(SpacedSet::new(vec![r(0, 1), r(1, 3)], r(1, 2), r(1, 1)).is_err());
        assert!(SpacedSet::new(vec![r(0, 1), r(2, 1)], r(1, 2), r(1, 1)).is_err());
        assert!(SpacedSet::new(vec![r(0, 1), r(1, 1)], r(0, 1), r(1, 1)).is_err());
        let s = SpacedSet::from_points(vec![r(1, 2), r(-1, 3), r(1, 2), r(2, 1)]).unwrap();
        assert_eq!(s.delta(), &r(5, 6));
        assert_eq!(s.enclosure(), &r(2, 1));
    }

    #[test]
    fn json_forms() {
        let f = farey(4).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"["1/4","1/3","1/2","2/3","3/4"]"#);
        let back: FareySequence = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FareySequence>(r#"["1/4","1/2","3/4"]"#).is_err());

        let x = farey(3).unwrap().as_spaced_set(&Rational::one()).unwrap();
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"points":["1/3","1/2","2/3"],"delta":"1/9","enclosure":"1/1"}"#);
        assert_eq!(serde_json::from_str::<SpacedSet>(&js).unwrap(), x);
        assert!(serde_json::from_str::<SpacedSet>(r#"{"points":["1/3","1/2"],"delta":"1/2","enclosure":"1/1"}"#).is_err());
    }
}
