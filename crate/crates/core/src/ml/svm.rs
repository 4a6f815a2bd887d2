//! Linear soft-margin SVM trained by deterministic full-batch subgradient
//! descent on
//!
//! ```text
//! F(w, b) = ½‖w‖² + C Σ max(0, 1 - s_i (w·x_i + b)),   s_i ∈ {-1, +1}
//! ```
//!
//! `w` takes subgradient steps on the `1/t` schedule of its strongly convex
//! part and is projected onto the ball `‖w‖ ≤ sqrt(2 C n)` that contains the
//! optimum. After every step the intercept is set to its exact minimizer
//! for the current `w` (the hinge sum is piecewise linear in `b`, so one of
//! its breakpoints is optimal). The best iterate seen is returned.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

use super::matrix::class_counts;
use super::{FeatureMatrix, LinearModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub iterations: usize,
}

impl SvmParams {
    pub fn new(c: f64) -> Self {
        SvmParams {
            c,
            iterations: 2000,
        }
    }
}

pub fn svm_objective(x: ArrayView2<'_, f64>, y: &[u8], model: &LinearModel, c: f64) -> f64 {
    let reg = 0.5 * model.weights.iter().map(|w| w * w).sum::<f64>();
    let hinge: f64 = x
        .rows()
        .into_iter()
        .zip(y)
        .map(|(r, &yi)| (1.0 - sign(yi) * model.decision(r)).max(0.0))
        .sum();
    reg + c * hinge
}

fn sign(label: u8) -> f64 {
    if label == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Smallest minimizer of `Σ max(0, 1 - s_i (u_i + b))` over `b`.
///
/// Sweeps the breakpoints `s_i - u_i` upwards and stops at the first one
/// where the right derivative (negatives switched on minus positives still
/// active) is non-negative. Needs both signs present.
fn best_intercept(margins: &[f64], signs: &[f64]) -> f64 {
    let mut points: Vec<(f64, bool)> = margins.iter().zip(signs).map(|(u, s)| (s - u, *s > 0.0)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pos_active = points.iter().filter(|p| p.1).count() as i64;
    let mut neg_active = 0i64;
    let mut i = 0;
    while i < points.len() {
        let b = points[i].0;
        while i < points.len() && points[i].0 == b {
            if points[i].1 {
                pos_active -= 1;
            } else {
                neg_active += 1;
            }
            i += 1;
        }
        if neg_active >= pos_active {
            return b;
        }
    }
    points.last().map_or(0.0, |p| p.0)
}

/// Hinge subgradient weights in `[0, 1]` at the exact intercept: 1 for
/// margin violators, 0 for points beyond the margin, and for points on the
/// margin whatever makes the intercept component vanish. The resulting
/// `w`-subgradient is a subgradient of `min_b F(w, b)`.
fn hinge_weights(margins: &[f64], intercept: f64, signs: &[f64], weight: &mut [f64]) {
    const ON_MARGIN: f64 = 1e-12;
    let mut residual = 0.0;
    let (mut on_pos, mut on_neg) = (0usize, 0usize);
    for ((u, s), a) in margins.iter().zip(signs).zip(weight.iter_mut()) {
        let slack = 1.0 - s * (u + intercept);
        *a = if slack > ON_MARGIN {
            residual -= s;
            1.0
        } else {
            if slack >= -ON_MARGIN {
                if *s > 0.0 {
                    on_pos += 1;
                } else {
                    on_neg += 1;
                }
            }
            0.0
        };
    }
    let (share_pos, share_neg) = if residual > 0.0 && on_pos > 0 {
        ((residual / on_pos as f64).min(1.0), 0.0)
    } else if residual < 0.0 && on_neg > 0 {
        (0.0, (-residual / on_neg as f64).min(1.0))
    } else {
        (0.0, 0.0)
    };
    for ((u, s), a) in margins.iter().zip(signs).zip(weight.iter_mut()) {
        let slack = 1.0 - s * (u + intercept);
        if slack.abs() <= ON_MARGIN {
            *a = if *s > 0.0 { share_pos } else { share_neg };
        }
    }
}

pub(crate) fn fit(x: ArrayView2<'_, f64>, y: &[u8], params: &SvmParams) -> Result<LinearModel> {
    if !(params.c > 0.0) || !params.c.is_finite() {
        return Err(Error::invalid(format!("C = {} must be positive", params.c)));
    }
    let [n0, n1] = class_counts(y);
    if n0 == 0 || n1 == 0 {
        return Err(Error::Refused("a linear SVM needs both classes".into()));
    }
    let n = y.len();
    let p = x.ncols();
    let radius = (2.0 * params.c * n as f64).sqrt();
    let signs: Vec<f64> = y.iter().map(|&l| sign(l)).collect();
    let mut model = LinearModel::zeros(p);
    let mut margins = vec![0.0; n];
    model.intercept = best_intercept(&margins, &signs);
    let mut best = model.clone();
    let mut best_obj = svm_objective(x, y, &model, params.c);
    let mut grad_w = vec![0.0; p];
    let mut weight = vec![0.0; n];
    for t in 1..=params.iterations {
        hinge_weights(&margins, model.intercept, &signs, &mut weight);
        grad_w.copy_from_slice(&model.weights);
        for ((row, &s), &a) in x.rows().into_iter().zip(&signs).zip(&weight) {
            if a > 0.0 {
                grad_w.iter_mut().zip(row).for_each(|(g, v)| *g -= params.c * a * s * v);
            }
        }
        let eta = 1.0 / t as f64;
        model.weights.iter_mut().zip(&grad_w).for_each(|(w, g)| *w -= eta * g);
        let norm = model.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        if norm > radius {
            model.weights.iter_mut().for_each(|w| *w *= radius / norm);
        }
        model.intercept = 0.0;
        for (m, row) in margins.iter_mut().zip(x.rows()) {
            *m = model.decision(row);
        }
        model.intercept = best_intercept(&margins, &signs);
        let hinge: f64 = margins
            .iter()
            .zip(&signs)
            .map(|(u, s)| (1.0 - s * (u + model.intercept)).max(0.0))
            .sum();
        let obj = 0.5 * model.weights.iter().map(|w| w * w).sum::<f64>() + params.c * hinge;
        if obj < best_obj {
            best_obj = obj;
            best = model.clone();
        }
    }
    Ok(best)
}

/// A fitted SVM plus its decision scores on the training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmFit {
    pub model: LinearModel,
    pub scores: Vec<f64>,
}

/// Linear SVM on a standardized feature matrix.
pub fn linear_svm(fm: &FeatureMatrix, c: f64) -> Result<SvmFit> {
    if !fm.is_standardized() {
        return Err(Error::Refused("standardize features before fitting an SVM".into()));
    }
    let model = fit(fm.data(), fm.labels(), &SvmParams::new(c))?;
    let scores = model.decisions(fm.data());
    Ok(SvmFit { model, scores })
}
