//! Confusion counts and F-beta with IN as the positive class.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("decision and truth keys differ: {0:?}")]
    KeyMismatch(Vec<String>),
    #[error("F-beta undefined: no positive ground truth and no positive predictions")]
    NoPositives,
    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, decision: bool, truth: bool) {
        match (decision, truth) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut c = Self::default();
        for (d, t) in pairs {
            c.record(d, t);
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// `tp / (tp + fp)`; `None` without positive predictions.
    pub fn precision(&self) -> Option<f64> {
        let denom = self.tp + self.fp;
        (denom > 0).then(|| self.tp as f64 / denom as f64)
    }

    /// `tp / (tp + fn)`; `None` without positive ground truth.
    pub fn recall(&self) -> Option<f64> {
        let denom = self.tp + self.fn_;
        (denom > 0).then(|| self.tp as f64 / denom as f64)
    }
}

/// Count decisions against truths. Both maps must share the same keys.
pub fn confusion<K: Ord + Display>(
    decisions: &BTreeMap<K, bool>,
    truths: &BTreeMap<K, bool>,
) -> Result<ConfusionCounts, MetricsError> {
    let mut mismatch: Vec<String> = decisions
        .keys()
        .filter(|k| !truths.contains_key(*k))
        .chain(truths.keys().filter(|k| !decisions.contains_key(*k)))
        .map(|k| k.to_string())
        .collect();
    if !mismatch.is_empty() {
        mismatch.sort();
        return Err(MetricsError::KeyMismatch(mismatch));
    }
    Ok(ConfusionCounts::from_pairs(
        decisions.iter().map(|(k, &d)| (d, truths[k])),
    ))
}

/// `F_β = (1+β²)PR / (β²P + R)`.
///
/// Zero when there are no true positives but some error mass; one for a
/// perfect classification with at least one positive.
pub fn f_beta(counts: &ConfusionCounts, beta: f64) -> Result<f64, MetricsError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(MetricsError::InvalidBeta(beta));
    }
    if counts.tp + counts.fp + counts.fn_ == 0 {
        return Err(MetricsError::NoPositives);
    }
    if counts.tp == 0 {
        return Ok(0.0);
    }
    if counts.fp == 0 && counts.fn_ == 0 {
        return Ok(1.0);
    }
    let p = counts.tp as f64 / (counts.tp + counts.fp) as f64;
    let r = counts.tp as f64 / (counts.tp + counts.fn_) as f64;
    let b2 = beta * beta;
    Ok((1.0 + b2) * p * r / (b2 * p + r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionCounts {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    fn truths10() -> BTreeMap<u32, bool> {
        (0..10u32).map(|i| (i, i < 4)).collect()
    }

    #[test]
    fn confusion_examples() {
        let t = truths10();
        assert_eq!(confusion(&t, &t).unwrap(), counts(4, 0, 6, 0));
        let complement: BTreeMap<u32, bool> = t.iter().map(|(k, v)| (*k, !v)).collect();
        let c = confusion(&complement, &t).unwrap();
        assert_eq!((c.tp, c.tn), (0, 0));
        let zeros: BTreeMap<u32, bool> = t.keys().map(|k| (*k, false)).collect();
        let c = confusion(&zeros, &t).unwrap();
        assert_eq!((c.fn_, c.tn), (4, 6));
        assert_eq!(c.total(), 10);
    }

    #[test]
    fn confusion_key_mismatch() {
        let t = truths10();
        let mut d = t.clone();
        d.remove(&3);
        d.insert(42, true);
        assert_eq!(
            confusion(&d, &t),
            Err(MetricsError::KeyMismatch(vec!["3".into(), "42".into()]))
        );
    }

    #[test]
    fn f_beta_examples() {
        assert_eq!(f_beta(&counts(4, 0, 6, 0), 1.0), Ok(1.0));
        let c = counts(2, 2, 0, 0);
        assert!((f_beta(&c, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((f_beta(&c, 10.0).unwrap() - 50.5 / 51.0).abs() < 1e-12);
        assert!((f_beta(&c, 1e6).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn f_beta_degenerate_rules() {
        assert_eq!(f_beta(&counts(0, 3, 5, 0), 1.0), Ok(0.0));
        assert_eq!(f_beta(&counts(0, 0, 5, 2), 1.0), Ok(0.0));
        assert_eq!(f_beta(&counts(0, 0, 5, 0), 1.0), Err(MetricsError::NoPositives));
        assert_eq!(f_beta(&counts(1, 0, 5, 0), 0.0), Err(MetricsError::InvalidBeta(0.0)));
    }

    proptest! {
        #[test]
        fn f1_is_harmonic_mean(tp in 1u64..500, fp in 0u64..500, fn_ in 0u64..500) {
            let c = counts(tp, fp, 0, fn_);
            let p = c.precision().unwrap();
            let r = c.recall().unwrap();
            let h = 2.0 / (1.0 / p + 1.0 / r);
            prop_assert!((f_beta(&c, 1.0).unwrap() - h).abs() < 1e-12);
        }

        #[test]
        fn equal_precision_recall_fixes_score(tp in 1u64..500, err in 0u64..500, beta in 0.01f64..100.0) {
            // fp == fn gives P == R
            let c = counts(tp, err, 7, err);
            let p = c.precision().unwrap();
            prop_assert!((f_beta(&c, beta).unwrap() - p).abs() < 1e-12);
        }

        #[test]
        fn monotone_in_true_positives(tp in 0u64..500, fp in 0u64..500, fn_ in 0u64..500, beta in 0.01f64..100.0) {
            prop_assume!(tp + fp + fn_ > 0);
            let lo = f_beta(&counts(tp, fp, 0, fn_), beta).unwrap();
            let hi = f_beta(&counts(tp + 1, fp, 0, fn_), beta).unwrap();
            prop_assert!(hi >= lo - 1e-15);
        }
    }
}
