//! Slow, independent reference computations.
//!
//! These share no code path with the main modules beyond the basic number
//! types: no factorization, no Farey recurrence, no combinatorial moments.
//! The self-test and the acceptance suite compare the two.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::Rational;
use crate::bounds::SieveInstance;
use crate::lattice::CirclePointProblem;
use crate::summation::sum;

/// `r(n)` for every `n <= limit`, by scanning the disc `x^2 + y^2 <= limit`.
pub fn r_histogram(limit: u64) -> Vec<u32> {
    let mut hist = vec![0u32; limit as usize + 1];
    let s = (limit as f64).sqrt() as i64 + 1;
    for x in -s..=s {
        for y in -s..=s {
            let n = (x * x + y * y) as u64;
            if n <= limit {
                hist[n as usize] += 1;
            }
        }
    }
    hist
}

/// `|F(Q)|` by counting coprime pairs `1 <= a < q <= Q`.
pub fn farey_count_brute(order: u64) -> u64 {
    (2..=order).map(|q| (1..q).filter(|a| a.gcd(&q) == 1).count() as u64).sum()
}

/// Box points of a circle problem by testing every lattice point.
pub fn circle_box_scan(prob: &CirclePointProblem) -> Vec<(i64, i64)> {
    let h = prob.h.floor().to_i64().expect("validated H");
    let q = prob.m.denom().to_i128().expect("small m");
    let p = prob.m.numer().to_i128().expect("small m");
    let (c1, c2, c3) = (prob.c1.to_i128().expect("small c1"), prob.c2.to_i128().expect("small c2"), prob.c3.to_i128().expect("small c3"));
    let mut out = Vec::new();
    for x in -h..=h {
        for y in -h..=h {
            // q^2 ((c1 x - c2)^2 + (c1 y - m c2)^2) = q^2 c3
            let u = q * (c1 * x as i128 - c2);
            let v = q * c1 * y as i128 - p * c2;
            if u * u + v * v == q * q * c3 {
                out.push((x, y));
            }
        }
    }
    out
}

/// `sup_k #{(i, j) : y_i + y_j = k}` by hashing every ordered pair.
pub fn additive_sup_brute(y: &[i128]) -> u64 {
    let mut counts: HashMap<i128, u64> = HashMap::new();
    for a in y {
        for b in y {
            *counts.entry(a + b).or_default() += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// Equispaced quadrature of `|f|^2` and `|f*|^4` over `[0, 1]` on `2^bits` nodes.
///
/// Exact up to rounding whenever `2 (max y - min y) < 2^bits`: the integrands
/// are then trigonometric polynomials whose frequencies do not alias.
pub fn quadrature_moments(a: &[Complex64], y: &[i64], bits: u32) -> (f64, f64) {
    let nodes = 1usize << bits;
    let mask = nodes as i64 - 1;
    let table: Vec<Complex64> = (0..nodes).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / nodes as f64)).collect();
    let residues: Vec<i64> = y.iter().map(|v| v & mask).collect();
    let mags: Vec<f64> = a.iter().map(|z| z.norm()).collect();
    let mut l2 = Vec::with_capacity(nodes);
    let mut l4 = Vec::with_capacity(nodes);
    for k in 0..nodes as i64 {
        let mut f = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        for ((ai, mi), r) in a.iter().zip(&mags).zip(&residues) {
            let e = table[((k * r) & mask) as usize];
            f += ai * e;
            g += mi * e;
        }
        l2.push(f.norm_sqr());
        let g2 = g.norm_sqr();
        l4.push(g2 * g2);
    }
    (sum(l2) / nodes as f64, sum(l4) / nodes as f64)
}

/// `sum_{y_i + y_j = y_k + y_l} m_i m_j m_k m_l` over all index quadruples.
pub fn l4_quadruple_loop(mags: &[Rational], y: &[BigInt]) -> Rational {
    let n = y.len();
    let mut total = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let s = &y[i] + &y[j];
            let mij = &mags[i] * &mags[j];
            for k in 0..n {
                for l in 0..n {
                    if &y[k] + &y[l] == s {
                        total = total + &mij * &(&mags[k] * &mags[l]);
                    }
                }
            }
        }
    }
    total
}

/// The Farey-form left side with every phase `x P(i)` formed in `f64`.
///
/// Meaningless once `|x P(i)|` is large; used to show the exact path matters.
pub fn naive_corollary_lhs(inst: &SieveInstance) -> f64 {
    let amp = &inst.amplitude;
    let (c0, c1, c2) = (amp.c0.to_f64(), amp.c1.to_f64(), amp.c2.to_f64());
    let m = amp.m.to_f64().unwrap_or(f64::INFINITY);
    let terms: Vec<f64> = inst
        .farey
        .fractions()
        .iter()
        .map(|x| {
            let xf = x.to_f64();
            let f: Complex64 = amp
                .a
                .iter()
                .enumerate()
                .map(|(k, ai)| {
                    let i = m + (k + 1) as f64;
                    ai * Complex64::from_polar(1.0, TAU * xf * (c0 * i * i + c1 * i + c2))
                })
                .sum();
            f.norm_sqr()
        })
        .collect();
    sum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_histogram() {
        let h = r_histogram(25);
        assert_eq!(&h[..6], &[1, 4, 4, 0, 4, 8]);
        assert_eq!(h[25], 12);
    }

    #[test]
    fn farey_counts() {
        assert_eq!(farey_count_brute(1), 0);
        assert_eq!(farey_count_brute(4), 5);
        assert_eq!(farey_count_brute(100), 3043);
    }

    #[test]
    fn quadrature_on_two_terms() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let (l2, l4) = quadrature_moments(&a, &[3, -5], 8);
        assert!((l2 - 5.0).abs() < 1e-12);
        // |f*|^4 for 1 e(3t) + 2 e(-5t): 1 + 16 + 4*4 = 33
        assert!((l4 - 33.0).abs() < 1e-11);
    }

    #[test]
    fn quadruple_loop_small() {
        let mags = [Rational::one(), Rational::one()];
        let y = [BigInt::from(0), BigInt::from(1)];
        // levels 0:1, 1:2, 2:1
        assert_eq!(l4_quadruple_loop(&mags, &y), Rational::from_integer(6));
        assert_eq!(additive_sup_brute(&[0, 1]), 2);
    }
}
