use ndarray::{ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

/// `w · x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn zeros(p: usize) -> Self {
        LinearModel {
            weights: vec![0.0; p],
            intercept: 0.0,
        }
    }

    pub fn decision(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }

    pub fn decisions(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.rows().into_iter().map(|r| self.decision(r)).collect()
    }

    /// Columns with a nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&j| self.weights[j] != 0.0).collect()
    }
}
