//! Nested stratified cross-validation.
//!
//! The outer loop estimates performance; an inner loop on each outer
//! training set picks the hyperparameters by pooled accuracy. By default
//! standardization, oversampling and feature selection are refit inside
//! every training fold. `smote_inside_folds = false` instead standardizes
//! and balances the whole data set once before splitting, which leaks
//! information into the test folds and exists only to reproduce that
//! protocol.

use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::sig::MultiIndex;

use super::matrix::class_counts;
use super::model::{fit_all, fit_candidate, ModelSpec};
use super::{balance, metrics, FeatureMatrix, Metrics, OversampleConfig, Standardizer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CvConfig {
    pub outer_folds: usize,
    pub inner_folds: usize,
    pub seed: u64,
    pub smote_inside_folds: bool,
    /// `None` trains on the data as it is.
    pub oversample: Option<OversampleConfig>,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            outer_folds: 6,
            inner_folds: 3,
            seed: 0,
            smote_inside_folds: true,
            oversample: Some(OversampleConfig::default()),
        }
    }
}

impl CvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_folds < 2 || self.inner_folds < 2 {
            return Err(Error::config("fold counts must be at least 2"));
        }
        if let Some(o) = &self.oversample {
            if o.k == 0 {
                return Err(Error::config("oversampling k must be positive"));
            }
        }
        Ok(())
    }
}

/// Splits positions `0..labels.len()` into `k` test folds with class
/// proportions preserved. Each class is shuffled and dealt round-robin, the
/// deal continuing from class 0 into class 1 so fold sizes differ by at most
/// one. Positions within a fold are ascending.
pub fn stratified_folds(labels: &[u8], k: usize, rng: &mut impl Rng) -> Result<Vec<Vec<usize>>> {
    let counts = class_counts(labels);
    if k < 2 {
        return Err(Error::config("need at least 2 folds"));
    }
    if counts[0] < k || counts[1] < k {
        return Err(Error::config(format!(
            "{k} stratified folds need at least {k} samples per class; have {} and {}",
            counts[0], counts[1]
        )));
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(rng);
        for i in members {
            folds[next % k].push(i);
            next += 1;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Rows involved in one outer fold. Under the leaky protocol rows past the
/// original count are synthetic, and every original row is recorded as
/// seen by the up-front preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAudit {
    pub fold: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    /// Rows any standardizer was fit on while processing this fold.
    pub standardization_rows: Vec<usize>,
    /// Rows any oversampler drew neighbours from.
    pub oversampling_rows: Vec<usize>,
}

impl FoldAudit {
    /// True when no test row contributed to a fitted preprocessing step.
    pub fn is_clean(&self) -> bool {
        !self
            .test
            .iter()
            .any(|t| self.standardization_rows.binary_search(t).is_ok() || self.oversampling_rows.binary_search(t).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub truth: u8,
    pub predicted: u8,
    pub score: f64,
    pub fold: usize,
    pub synthetic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    /// One per evaluated row, in row order.
    pub predictions: Vec<Prediction>,
    /// Pooled over all outer test folds.
    pub metrics: Metrics,
    pub fold_choices: Vec<String>,
    /// Hyperparameters picked when tuning on all rows.
    pub final_choice: String,
    /// Features used by the model fit on all rows.
    pub selected_features: Vec<MultiIndex>,
    /// Features left after dropping constant columns.
    pub usable_features: usize,
    /// Synthetic rows added before splitting (leaky protocol) or for the
    /// final all-rows fit.
    pub n_synthetic: usize,
    pub audit: Vec<FoldAudit>,
}

#[derive(Debug, Clone, Copy)]
struct Prep {
    standardize: bool,
    oversample: Option<OversampleConfig>,
}

struct Prepared {
    train_x: Array2<f64>,
    train_y: Vec<u8>,
    test_x: Array2<f64>,
    /// Base columns surviving standardization, in prepared order.
    columns: Vec<usize>,
    n_synthetic: usize,
}

/// Fits preprocessing on `train` and applies it to both row sets, logging
/// the rows each fitted step saw into `audit`.
fn prepare(
    base: ArrayView2<'_, f64>,
    y: &[u8],
    train: &[usize],
    test: &[usize],
    prep: Prep,
    rng: &mut impl Rng,
    audit: &mut Touched,
) -> Result<Prepared> {
    let mut train_x = base.select(Axis(0), train);
    let mut test_x = base.select(Axis(0), test);
    let mut train_y: Vec<u8> = train.iter().map(|&i| y[i]).collect();
    let mut columns: Vec<usize> = (0..base.ncols()).collect();
    if prep.standardize {
        let s = Standardizer::fit(train_x.view())?;
        train_x = s.transform(train_x.view());
        test_x = s.transform(test_x.view());
        columns = s.kept().to_vec();
        audit.standardization.extend_from_slice(train);
    }
    let mut n_synthetic = 0;
    if let Some(config) = &prep.oversample {
        match balance(train_x.view(), &train_y, config, rng) {
            Ok(b) => {
                if b.n_synthetic > 0 {
                    audit.oversampling.extend_from_slice(train);
                }
                n_synthetic = b.n_synthetic;
                train_x = b.x;
                train_y = b.y;
            }
            Err(Error::CannotOversample(reason)) => log::warn!("training on unbalanced fold: {reason}"),
            Err(e) => return Err(e),
        }
    }
    Ok(Prepared {
        train_x,
        train_y,
        test_x,
        columns,
        n_synthetic,
    })
}

#[derive(Default)]
struct Touched {
    standardization: Vec<usize>,
    oversampling: Vec<usize>,
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn complement(all: &[usize], remove: &[usize]) -> Vec<usize> {
    all.iter().copied().filter(|r| remove.binary_search(r).is_err()).collect()
}

struct Runner<'a> {
    base: ArrayView2<'a, f64>,
    y: &'a [u8],
    spec: &'a ModelSpec,
    config: &'a CvConfig,
    prep: Prep,
}

impl Runner<'_> {
    /// Candidate with the best pooled inner-CV accuracy on `rows`; ties go
    /// to the earlier candidate.
    fn tune(&self, rows: &[usize], fold: usize, audit: &mut Touched) -> Result<usize> {
        let labels: Vec<u8> = rows.iter().map(|&r| self.y[r]).collect();
        let [n0, n1] = class_counts(&labels);
        let k = self.config.inner_folds.min(n0).min(n1);
        if self.spec.candidates() == 1 || k < 2 {
            return Ok(0);
        }
        let mut frng = rng::stream(self.config.seed, "inner-folds", &[fold as u64]);
        let folds = stratified_folds(&labels, k, &mut frng)?;
        let mut correct = vec![0usize; self.spec.candidates()];
        let mut usable = vec![true; self.spec.candidates()];
        for (i, positions) in folds.iter().enumerate() {
            let test: Vec<usize> = positions.iter().map(|&p| rows[p]).collect();
            let train = complement(rows, &test);
            let mut orng = rng::stream(self.config.seed, "oversample-inner", &[fold as u64, i as u64]);
            let p = prepare(self.base, self.y, &train, &test, self.prep, &mut orng, audit)?;
            for (c, fitted) in fit_all(p.train_x.view(), &p.train_y, self.spec)?.into_iter().enumerate() {
                match fitted {
                    Some(f) => {
                        let (pred, _) = f.predict(p.test_x.view())?;
                        correct[c] += pred.iter().zip(&test).filter(|(a, &r)| **a == self.y[r]).count();
                    }
                    None => usable[c] = false,
                }
            }
        }
        (0..correct.len())
            .filter(|&c| usable[c])
            .max_by(|&a, &b| correct[a].cmp(&correct[b]).then(b.cmp(&a)))
            .ok_or_else(|| Error::config("no hyperparameter candidate fits the inner folds"))
    }

    /// Tunes on `train`, fits the chosen candidate and scores `test`.
    fn run(&self, fold: usize, train: &[usize], test: &[usize]) -> Result<FoldResult> {
        let mut touched = Touched::default();
        let choice = self.tune(train, fold, &mut touched)?;
        let mut orng = rng::stream(self.config.seed, "oversample-outer", &[fold as u64]);
        let p = prepare(self.base, self.y, train, test, self.prep, &mut orng, &mut touched)?;
        let fitted = fit_candidate(p.train_x.view(), &p.train_y, self.spec, choice)?
            .ok_or_else(|| Error::config(format!("candidate {} cannot be fit", self.spec.describe(choice))))?;
        let (predicted, scores) = if test.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            fitted.predict(p.test_x.view())?
        };
        let features = fitted.features().into_iter().map(|j| p.columns[j]).collect();
        Ok(FoldResult {
            choice,
            predicted,
            scores,
            features,
            usable: p.columns.len(),
            n_synthetic: p.n_synthetic,
            audit: FoldAudit {
                fold,
                train: train.to_vec(),
                test: test.to_vec(),
                standardization_rows: sorted_unique(touched.standardization),
                oversampling_rows: sorted_unique(touched.oversampling),
            },
        })
    }
}

struct FoldResult {
    choice: usize,
    predicted: Vec<u8>,
    scores: Vec<f64>,
    features: Vec<usize>,
    usable: usize,
    n_synthetic: usize,
    audit: FoldAudit,
}

/// Runs nested stratified cross-validation of `spec` on `data`.
///
/// `data` should hold raw (unstandardized) features; preprocessing is part
/// of the protocol. Outer folds run in parallel; results do not depend on
/// the thread count.
pub fn nested_cv(data: &FeatureMatrix, spec: &ModelSpec, config: &CvConfig) -> Result<CvOutcome> {
    config.validate()?;
    spec.validate()?;
    let [n0, n1] = data.class_counts();
    if n0 < config.outer_folds || n1 < config.outer_folds {
        return Err(Error::config(format!(
            "{} outer folds need at least {} samples per class; have {n0} and {n1}",
            config.outer_folds, config.outer_folds
        )));
    }

    // The leaky protocol preprocesses everything up front.
    let (base, y, columns, ids, n_original, pre_synthetic, prep) = if config.smote_inside_folds {
        (
            data.data().to_owned(),
            data.labels().to_vec(),
            data.columns().to_vec(),
            data.ids().to_vec(),
            data.nrows(),
            0,
            Prep {
                standardize: true,
                oversample: config.oversample,
            },
        )
    } else {
        let (std, _) = data.standardize()?;
        let (x, y, n_syn) = match &config.oversample {
            Some(o) => {
                let mut r = rng::stream(config.seed, "oversample-all", &[]);
                let b = balance(std.data(), std.labels(), o, &mut r)?;
                (b.x, b.y, b.n_synthetic)
            }
            None => (std.data().to_owned(), std.labels().to_vec(), 0),
        };
        let mut ids = std.ids().to_vec();
        ids.extend((0..n_syn).map(|i| format!("synthetic-{i}")));
        (
            x,
            y,
            std.columns().to_vec(),
            ids,
            data.nrows(),
            n_syn,
            Prep {
                standardize: false,
                oversample: None,
            },
        )
    };

    let runner = Runner {
        base: base.view(),
        y: &y,
        spec,
        config,
        prep,
    };
    let mut frng = rng::stream(config.seed, "outer-folds", &[]);
    let folds = stratified_folds(&y, config.outer_folds, &mut frng)?;
    let all: Vec<usize> = (0..y.len()).collect();
    let k = folds.len();
    // fold k is the final fit on every row
    let results: Vec<FoldResult> = (0..=k)
        .into_par_iter()
        .map(|f| match folds.get(f) {
            Some(test) => runner.run(f, &complement(&all, test), test),
            None => runner.run(f, &all, &[]),
        })
        .collect::<Result<_>>()?;

    let mut predictions: Vec<Option<Prediction>> = vec![None; y.len()];
    for (f, r) in results[..k].iter().enumerate() {
        for ((&row, &p), &s) in r.audit.test.iter().zip(&r.predicted).zip(&r.scores) {
            predictions[row] = Some(Prediction {
                id: ids[row].clone(),
                truth: y[row],
                predicted: p,
                score: s,
                fold: f,
                synthetic: row >= n_original,
            });
        }
    }
    let predictions: Vec<Prediction> = predictions.into_iter().map(|p| p.expect("every row is tested once")).collect();
    let truth: Vec<u8> = predictions.iter().map(|p| p.truth).collect();
    let pred: Vec<u8> = predictions.iter().map(|p| p.predicted).collect();
    let scores: Vec<f64> = predictions.iter().map(|p| p.score).collect();
    let metrics = metrics(&truth, &pred, &scores)?;

    let mut audit: Vec<FoldAudit> = results[..k].iter().map(|r| r.audit.clone()).collect();
    if !config.smote_inside_folds {
        for a in &mut audit {
            a.standardization_rows = (0..n_original).collect();
            if pre_synthetic > 0 {
                a.oversampling_rows = (0..n_original).collect();
            }
        }
    }
    let last = &results[k];
    Ok(CvOutcome {
        metrics,
        fold_choices: results[..k].iter().map(|r| spec.describe(r.choice)).collect(),
        final_choice: spec.describe(last.choice),
        selected_features: last.features.iter().map(|&j| columns[j].clone()).collect(),
        usable_features: if config.smote_inside_folds { last.usable } else { columns.len() },
        n_synthetic: if config.smote_inside_folds { last.n_synthetic } else { pre_synthetic },
        audit,
        predictions,
    })
}
