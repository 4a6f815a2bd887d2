use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary classification metrics. `None` marks a metric that is undefined
/// for the given labels (e.g. sensitivity with no positive ground truth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub accuracy: Option<f64>,
    pub f1: Option<f64>,
    pub auc: Option<f64>,
    pub kappa: Option<f64>,
}

impl Metrics {
    pub const NAMES: [&'static str; 6] =
        ["sensitivity", "specificity", "accuracy", "f1", "auc", "kappa"];

    pub fn values(&self) -> [Option<f64>; 6] {
        [
            self.sensitivity,
            self.specificity,
            self.accuracy,
            self.f1,
            self.auc,
            self.kappa,
        ]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn from_labels(truth: &[u8], predicted: &[u8]) -> Self {
        let mut c = Confusion::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (1, 1) => c.tp += 1,
                (0, 0) => c.tn += 1,
                (0, _) => c.fp += 1,
                _ => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Sensitivity, specificity, accuracy, F1, AUC (rank statistic with
/// midranks for ties) and Cohen's kappa.
pub fn metrics(truth: &[u8], predicted: &[u8], scores: &[f64]) -> Result<Metrics> {
    if truth.len() != predicted.len() || truth.len() != scores.len() {
        return Err(Error::invalid(format!(
            "{} labels, {} predictions, {} scores",
            truth.len(),
            predicted.len(),
            scores.len()
        )));
    }
    if truth.iter().chain(predicted).any(|&l| l > 1) {
        return Err(Error::invalid("labels must be 0 or 1"));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("scores must be finite"));
    }
    let c = Confusion::from_labels(truth, predicted);
    let n = c.total();
    let accuracy = ratio(c.tp + c.tn, n);
    let kappa = accuracy.and_then(|p_o| {
        let n = n as f64;
        let pred_pos = (c.tp + c.fp) as f64 / n;
        let true_pos = (c.tp + c.fn_) as f64 / n;
        let p_e = pred_pos * true_pos + (1.0 - pred_pos) * (1.0 - true_pos);
        (p_e < 1.0).then(|| (p_o - p_e) / (1.0 - p_e))
    });
    Ok(Metrics {
        sensitivity: ratio(c.tp, c.tp + c.fn_),
        specificity: ratio(c.tn, c.tn + c.fp),
        accuracy,
        f1: ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_),
        auc: auc(truth, scores),
        kappa,
    })
}

/// Area under the ROC curve via the Mann-Whitney statistic; tied scores
/// receive their average rank. `None` unless both classes are present.
pub fn auc(truth: &[u8], scores: &[f64]) -> Option<f64> {
    let pos = truth.iter().filter(|&&t| t == 1).count();
    let neg = truth.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their mean
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum_pos += mid * order[i..=j].iter().filter(|&&k| truth[k] == 1).count() as f64;
        i = j + 1;
    }
    let (p, q) = (pos as f64, neg as f64);
    Some((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q))
}
