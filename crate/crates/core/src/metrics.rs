//! Classification metrics: confusion matrix, precision/recall/F1, accuracy.
//!
//! Everything is derived from a 3x3 confusion matrix indexed
//! `counts[gold][predicted]` with the canonical label order
//! (negative, neutral, positive). Zero denominators score 0 rather than NaN,
//! the usual convention for classes that are never predicted or never occur.

use core::fmt;

use crate::corpus::Label;

/// Confusion counts, `counts[gold.index()][predicted.index()]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    /// Total number of scored examples.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Gold-label support per class.
    pub fn support(&self) -> [u64; 3] {
        [0, 1, 2].map(|g| self.counts[g].iter().sum())
    }

    /// Adds one observation.
    pub fn record(&mut self, gold: Label, predicted: Label) {
        self.counts[gold.index()][predicted.index()] += 1;
    }
}

/// Precision, recall and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// The full evaluation summary for a prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    /// Per-class metrics in canonical label order.
    pub per_class: [ClassMetrics; 3],
    pub macro_f1: f64,
    /// Macro F1 weighted by gold support.
    pub weighted_f1: f64,
    pub support: [u64; 3],
}

/// Errors from metric computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Gold and predicted label lists differ in length.
    LengthMismatch { golds: usize, preds: usize },
    /// No examples to score.
    EmptyInput,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::LengthMismatch { golds, preds } => {
                write!(f, "{golds} gold labels but {preds} predictions")
            }
            MetricsError::EmptyInput => f.write_str("cannot score an empty prediction set"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Tallies a confusion matrix from aligned gold/predicted label lists.
pub fn confusion(golds: &[Label], preds: &[Label]) -> Result<ConfusionMatrix, MetricsError> {
    if golds.len() != preds.len() {
        return Err(MetricsError::LengthMismatch { golds: golds.len(), preds: preds.len() });
    }
    if golds.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (g, p) in golds.iter().zip(preds) {
        cm.record(*g, *p);
    }
    Ok(cm)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Computes the full report from a confusion matrix.
pub fn report(cm: &ConfusionMatrix) -> Result<MetricsReport, MetricsError> {
    let total = cm.total();
    if total == 0 {
        return Err(MetricsError::EmptyInput);
    }
    let support = cm.support();
    let mut per_class = [ClassMetrics { precision: 0.0, recall: 0.0, f1: 0.0 }; 3];
    for c in 0..3 {
        let tp = cm.counts[c][c];
        let predicted: u64 = (0..3).map(|g| cm.counts[g][c]).sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support[c]);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class[c] = ClassMetrics { precision, recall, f1 };
    }
    let correct: u64 = (0..3).map(|c| cm.counts[c][c]).sum();
    let macro_f1 = (per_class[0].f1 + per_class[1].f1 + per_class[2].f1) / 3.0;
    let weighted_f1 = (0..3)
        .map(|c| support[c] as f64 * per_class[c].f1)
        .sum::<f64>()
        / total as f64;
    Ok(MetricsReport {
        accuracy: correct as f64 / total as f64,
        per_class,
        macro_f1,
        weighted_f1,
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as Neg, Neutral as Neu, Positive as Pos};

    #[test]
    fn hand_worked_four_example_case() {
        let golds = [Neg, Neg, Pos, Neu];
        let preds = [Neg, Pos, Pos, Neu];
        let cm = confusion(&golds, &preds).unwrap();
        assert_eq!(cm.counts[0][0], 1);
        assert_eq!(cm.counts[0][2], 1);
        assert_eq!(cm.total(), 4);
        assert_eq!(cm.support(), [2, 1, 1]);

        let r = report(&cm).unwrap();
        assert_eq!(r.accuracy, 0.75);
        // Negative: P=1, R=1/2. Neutral: perfect. Positive: P=1/2, R=1.
        assert!((r.per_class[0].precision - 1.0).abs() < 1e-15);
        assert!((r.per_class[0].recall - 0.5).abs() < 1e-15);
        assert!((r.per_class[0].f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.per_class[1].f1 - 1.0).abs() < 1e-15);
        assert!((r.per_class[2].f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.macro_f1 - 7.0 / 9.0).abs() < 1e-15);
        assert!((r.weighted_f1 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn perfect_predictions() {
        let golds = [Neg, Neu, Pos, Pos];
        let cm = confusion(&golds, &golds).unwrap();
        let r = report(&cm).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
        assert_eq!(r.weighted_f1, 1.0);
        for c in r.per_class {
            assert_eq!(c.precision, 1.0);
            assert_eq!(c.recall, 1.0);
            assert_eq!(c.f1, 1.0);
        }
    }

    #[test]
    fn absent_class_scores_zero_not_nan() {
        // No neutral gold examples and none predicted.
        let golds = [Neg, Pos];
        let preds = [Pos, Neg];
        let r = report(&confusion(&golds, &preds).unwrap()).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!(r.per_class[1].precision, 0.0);
        assert_eq!(r.per_class[1].recall, 0.0);
        assert_eq!(r.per_class[1].f1, 0.0);
        assert!(r.macro_f1.is_finite() && r.weighted_f1.is_finite());
    }

    #[test]
    fn class_predicted_but_never_gold() {
        // Neutral predicted once, never gold: precision 0 (tp=0), recall 0.
        let golds = [Neg];
        let preds = [Neu];
        let r = report(&confusion(&golds, &preds).unwrap()).unwrap();
        assert_eq!(r.per_class[1].precision, 0.0);
        assert_eq!(r.per_class[1].recall, 0.0);
        assert_eq!(r.per_class[1].f1, 0.0);
        assert_eq!(r.support, [1, 0, 0]);
    }

    #[test]
    fn rejects_mismatch_and_empty() {
        assert_eq!(
            confusion(&[Neg], &[]),
            Err(MetricsError::LengthMismatch { golds: 1, preds: 0 })
        );
        assert_eq!(confusion(&[], &[]), Err(MetricsError::EmptyInput));
        assert_eq!(report(&ConfusionMatrix::default()), Err(MetricsError::EmptyInput));
    }

    #[test]
    fn report_against_brute_force_oracle() {
        // Deterministic pseudo-random label pairs, scored independently with
        // direct TP/FP/FN loops over the pairs.
        let mut rng = crate::rng::Rng::seed_from(11);
        for _ in 0..200 {
            let m = 1 + rng.below(40);
            let golds: alloc::vec::Vec<Label> =
                (0..m).map(|_| Label::from_index(rng.below(3)).unwrap()).collect();
            let preds: alloc::vec::Vec<Label> =
                (0..m).map(|_| Label::from_index(rng.below(3)).unwrap()).collect();
            let r = report(&confusion(&golds, &preds).unwrap()).unwrap();

            let mut correct = 0usize;
            for (g, p) in golds.iter().zip(&preds) {
                if g == p {
                    correct += 1;
                }
            }
            assert!((r.accuracy - correct as f64 / m as f64).abs() < 1e-12);

            let mut macro_sum = 0.0;
            let mut weighted_sum = 0.0;
            for class in Label::ALL {
                let tp = golds
                    .iter()
                    .zip(&preds)
                    .filter(|(g, p)| **g == class && **p == class)
                    .count() as f64;
                let fp = golds
                    .iter()
                    .zip(&preds)
                    .filter(|(g, p)| **g != class && **p == class)
                    .count() as f64;
                let fn_ = golds
                    .iter()
                    .zip(&preds)
                    .filter(|(g, p)| **g == class && **p != class)
                    .count() as f64;
                let prec = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
                let rec = if tp + fn_ == 0.0 { 0.0 } else { tp / (tp + fn_) };
                let f1 = if prec + rec == 0.0 { 0.0 } else { 2.0 * prec * rec / (prec + rec) };
                let got = r.per_class[class.index()];
                assert!((got.precision - prec).abs() < 1e-12);
                assert!((got.recall - rec).abs() < 1e-12);
                assert!((got.f1 - f1).abs() < 1e-12);
                macro_sum += f1;
                weighted_sum += (tp + fn_) * f1;
            }
            assert!((r.macro_f1 - macro_sum / 3.0).abs() < 1e-12);
            assert!((r.weighted_f1 - weighted_sum / m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn support_sums_to_total() {
        let golds = [Neg, Neg, Neu, Pos, Pos, Pos];
        let preds = [Neu, Neg, Neu, Pos, Neg, Pos];
        let cm = confusion(&golds, &preds).unwrap();
        assert_eq!(cm.support().iter().sum::<u64>(), cm.total());
        assert_eq!(cm.support(), [2, 1, 3]);
    }

    extern crate alloc;
}
