//! Elastic-net penalized logistic regression by cyclic coordinate descent.
//!
//! Minimizes
//!
//! ```text
//! (1/n) Σ log(1 + exp(-s_i (w·x_i + b))) + λ (ρ ‖w‖₁ + (1-ρ)/2 ‖w‖₂²)
//! ```
//!
//! Each coordinate step minimizes the quadratic majorizer given by the
//! logistic curvature bound `1/4`, followed by soft-thresholding, so the
//! objective never increases and exact zeros appear.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

use super::matrix::class_counts;
use super::{FeatureMatrix, LinearModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticNetParams {
    pub lambda: f64,
    pub rho: f64,
    /// Stop when one full sweep lowers the objective by less than this.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl ElasticNetParams {
    pub fn new(lambda: f64, rho: f64) -> Self {
        ElasticNetParams {
            lambda,
            rho,
            tolerance: 1e-8,
            max_sweeps: 20_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::invalid(format!("lambda = {} must be finite and >= 0", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(format!("rho = {} must be in [0, 1]", self.rho)));
        }
        Ok(())
    }
}

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(t))` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

pub(crate) fn objective(
    x: ArrayView2<'_, f64>,
    y: &[u8],
    model: &LinearModel,
    params: &ElasticNetParams,
) -> f64 {
    let n = y.len() as f64;
    let loss: f64 = x
        .rows()
        .into_iter()
        .zip(y)
        .map(|(r, &yi)| {
            let eta = model.decision(r);
            // -log p(y|x) = softplus(eta) - y eta
            softplus(eta) - f64::from(yi) * eta
        })
        .sum::<f64>()
        / n;
    let l1: f64 = model.weights.iter().map(|w| w.abs()).sum();
    let l2: f64 = model.weights.iter().map(|w| w * w).sum();
    loss + params.lambda * (params.rho * l1 + 0.5 * (1.0 - params.rho) * l2)
}

/// Smallest `λ` at which every weight is zero for mixing `rho`.
pub fn lambda_max(x: ArrayView2<'_, f64>, y: &[u8], rho: f64) -> f64 {
    let n = y.len() as f64;
    let ybar = y.iter().map(|&v| f64::from(v)).sum::<f64>() / n;
    let g = x
        .columns()
        .into_iter()
        .map(|c| (c.iter().zip(y).map(|(v, &yi)| v * (f64::from(yi) - ybar)).sum::<f64>() / n).abs())
        .fold(0.0, f64::max);
    g / rho.max(1e-12)
}

/// Fits on raw views. `warm` seeds the coefficients (pathwise fitting).
pub(crate) fn fit(
    x: ArrayView2<'_, f64>,
    y: &[u8],
    params: &ElasticNetParams,
    warm: Option<&LinearModel>,
) -> Result<LinearModel> {
    params.validate()?;
    let [n0, n1] = class_counts(y);
    if n0 == 0 || n1 == 0 {
        return Err(Error::Refused("logistic regression needs both classes".into()));
    }
    let n = y.len();
    let p = x.ncols();
    let nf = n as f64;
    let mut model = match warm {
        Some(m) if m.weights.len() == p => m.clone(),
        _ => LinearModel {
            weights: vec![0.0; p],
            intercept: (n1 as f64 / n0 as f64).ln(),
        },
    };
    let curvature: Vec<f64> = x
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>() / (4.0 * nf))
        .collect();
    let l1 = params.lambda * params.rho;
    let l2 = params.lambda * (1.0 - params.rho);
    let targets: Vec<f64> = y.iter().map(|&v| f64::from(v)).collect();
    let mut eta: Vec<f64> = model.decisions(x);
    let mut last = objective(x, y, &model, params);
    for _ in 0..params.max_sweeps {
        // intercept, unpenalized
        let g0 = eta.iter().zip(&targets).map(|(e, t)| sigmoid(*e) - t).sum::<f64>() / nf;
        let step = -g0 / 0.25;
        model.intercept += step;
        eta.iter_mut().for_each(|e| *e += step);
        for j in 0..p {
            let h = curvature[j];
            if h == 0.0 {
                model.weights[j] = 0.0;
                continue;
            }
            let col = x.column(j);
            let g = col
                .iter()
                .zip(eta.iter().zip(&targets))
                .map(|(v, (e, t))| v * (sigmoid(*e) - t))
                .sum::<f64>()
                / nf;
            let old = model.weights[j];
            let new = soft_threshold(h * old - g, l1) / (h + l2);
            if new != old {
                let delta = new - old;
                eta.iter_mut().zip(col).for_each(|(e, v)| *e += delta * v);
                model.weights[j] = new;
            }
        }
        let obj = objective(x, y, &model, params);
        if (last - obj).abs() < params.tolerance {
            break;
        }
        last = obj;
    }
    Ok(model)
}

/// Elastic-net logistic regression on a standardized feature matrix. The
/// selected features are [`LinearModel::support`].
pub fn elastic_net_logistic(fm: &FeatureMatrix, lambda: f64, rho: f64) -> Result<LinearModel> {
    if !fm.is_standardized() {
        return Err(Error::Refused(
            "elastic-net selection depends on feature scale; standardize first".into(),
        ));
    }
    fit(fm.data(), fm.labels(), &ElasticNetParams::new(lambda, rho), None)
}
