//! Verdicts for single inequality instances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Both sides of one inequality instance, the factors that built the right
/// side, and the roundoff allowance used to decide the verdict:
/// `pass` iff `lhs <= rhs + error_budget`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub factors: BTreeMap<String, f64>,
    pub error_budget: f64,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(inequality: &str, lhs: f64, rhs: f64, factors: BTreeMap<String, f64>, error_budget: f64) -> Self {
        debug_assert!(factors.values().all(|v| *v >= 0.0), "negative factor in {factors:?}");
        let verdict = if lhs.is_finite() && rhs.is_finite() && lhs <= rhs + error_budget {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        BoundReport { inequality: inequality.to_string(), lhs, rhs, factors, error_budget, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Roundoff allowance for a floating computation of `terms` elementary
/// operations on quantities of size at most `magnitude`.
pub fn rounding_budget(terms: usize, magnitude: f64) -> f64 {
    8.0 * (terms as f64 + 4.0) * f64::EPSILON * magnitude
}

pub(crate) fn factors<const K: usize>(entries: [(&str, f64); K]) -> BTreeMap<String, f64> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_uses_budget() {
        assert!(BoundReport::new("t", 1.0, 1.0, BTreeMap::new(), 0.0).passed());
        assert!(!BoundReport::new("t", 1.0 + 1e-9, 1.0, BTreeMap::new(), 0.0).passed());
        assert!(BoundReport::new("t", 1.0 + 1e-12, 1.0, BTreeMap::new(), 1e-10).passed());
        assert!(!BoundReport::new("t", f64::NAN, 1.0, BTreeMap::new(), 1.0).passed());
    }

    #[test]
    fn json_shape() {
        let r = BoundReport::new("lemma", 2.0, 3.0, factors([("card", 2.0)]), 0.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["factors"]["card"], 2.0);
    }
}
