use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::logistic::{self, ElasticNetParams};
use super::svm::{self, SvmParams};
use super::{knn, LinearModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Logistic,
    Svm,
    Knn,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Logistic, ClassifierKind::Svm, ClassifierKind::Knn];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Logistic => "logistic",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Knn => "knn",
        }
    }

    /// Column heading used in tabular reports.
    pub fn title(self) -> &'static str {
        match self {
            ClassifierKind::Logistic => "Logistic regression",
            ClassifierKind::Svm => "SVM",
            ClassifierKind::Knn => "kNN",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown classifier `{s}` (expected logistic, svm or knn)")))
    }
}

/// One point of a hyperparameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", rename_all = "lowercase")]
pub enum Hyper {
    Logistic { lambda: f64, rho: f64 },
    Svm { c: f64 },
    Knn { k: usize },
}

impl Hyper {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Hyper::Logistic { .. } => ClassifierKind::Logistic,
            Hyper::Svm { .. } => ClassifierKind::Svm,
            Hyper::Knn { .. } => ClassifierKind::Knn,
        }
    }
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::Logistic { lambda, rho } => write!(f, "lambda={lambda:.4e} rho={rho}"),
            Hyper::Svm { c } => write!(f, "C={c:.4e}"),
            Hyper::Knn { k } => write!(f, "k={k}"),
        }
    }
}

/// `n` points spaced evenly in `log10` from `10^from` to `10^to`.
pub fn logspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![10f64.powf(from)],
        _ => (0..n)
            .map(|i| 10f64.powf(from + (to - from) * i as f64 / (n - 1) as f64))
            .collect(),
    }
}

/// Default grids, ordered from strongest to weakest regularization so that
/// ties resolve to the simpler model:
///
/// - logistic: `ρ ∈ {0.2, 0.5, 0.8}` × 10 values of `λ` from 1 down to 1e-3
/// - SVM: 10 values of `C` from 1e-3 up to 1e2
/// - kNN: `k ∈ {1, 3, 5, 7}`
pub fn default_grid(kind: ClassifierKind) -> Vec<Hyper> {
    match kind {
        ClassifierKind::Logistic => [0.2, 0.5, 0.8]
            .into_iter()
            .flat_map(|rho| logspace(0.0, -3.0, 10).into_iter().map(move |lambda| Hyper::Logistic { lambda, rho }))
            .collect(),
        ClassifierKind::Svm => logspace(-3.0, 2.0, 10).into_iter().map(|c| Hyper::Svm { c }).collect(),
        ClassifierKind::Knn => [1, 3, 5, 7].into_iter().map(|k| Hyper::Knn { k }).collect(),
    }
}

/// A classifier, its grid, and optional elastic-net feature selection run
/// before it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub classifier: ClassifierKind,
    pub grid: Vec<Hyper>,
    /// Candidate `λ` for the selection step, strongest first. Empty means
    /// the classifier sees every feature.
    pub selection_lambdas: Vec<f64>,
    pub selection_rho: f64,
}

impl ModelSpec {
    /// Logistic regression selects its own features through its penalty;
    /// SVM and kNN get an elastic-net selection step with `ρ = 0.5` and
    /// five `λ` values from 0.5 down to 0.005.
    pub fn default_for(kind: ClassifierKind) -> Self {
        let selection_lambdas = match kind {
            ClassifierKind::Logistic => Vec::new(),
            _ => logspace(0.5f64.log10(), 0.005f64.log10(), 5),
        };
        ModelSpec {
            classifier: kind,
            grid: default_grid(kind),
            selection_lambdas,
            selection_rho: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::config("hyperparameter grid is empty"));
        }
        if let Some(h) = self.grid.iter().find(|h| h.kind() != self.classifier) {
            return Err(Error::config(format!("grid point {h} does not belong to {}", self.classifier)));
        }
        if !(0.0..=1.0).contains(&self.selection_rho) || self.selection_lambdas.iter().any(|l| !(*l >= 0.0)) {
            return Err(Error::config("invalid selection parameters"));
        }
        Ok(())
    }

    /// Number of (selection, hyperparameter) candidates.
    pub fn candidates(&self) -> usize {
        self.selection_lambdas.len().max(1) * self.grid.len()
    }

    pub fn describe(&self, candidate: usize) -> String {
        let (s, g) = (candidate / self.grid.len(), candidate % self.grid.len());
        match self.selection_lambdas.get(s) {
            Some(l) => format!("select(lambda={l:.4e} rho={}) {}", self.selection_rho, self.grid[g]),
            None => self.grid[g].to_string(),
        }
    }
}

/// A trained model restricted to a subset of columns.
#[derive(Debug, Clone)]
pub enum Fitted {
    Linear { model: LinearModel, columns: Vec<usize> },
    Knn { x: Array2<f64>, y: Vec<u8>, k: usize, columns: Vec<usize> },
}

impl Fitted {
    /// Columns the model reads, as indices into the matrix it was fit on.
    /// For a penalized logistic model, only those with nonzero weight.
    pub fn features(&self) -> Vec<usize> {
        match self {
            Fitted::Linear { model, columns } => model.support().into_iter().map(|j| columns[j]).collect(),
            Fitted::Knn { columns, .. } => columns.clone(),
        }
    }

    /// Predicted labels and real-valued scores (higher means class 1).
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<(Vec<u8>, Vec<f64>)> {
        match self {
            Fitted::Linear { model, columns } => {
                let scores = model.decisions(x.select(Axis(1), columns).view());
                let labels = scores.iter().map(|&s| u8::from(s >= 0.0)).collect();
                Ok((labels, scores))
            }
            Fitted::Knn { x: train, y, k, columns } => {
                knn::predict(train.view(), y, x.select(Axis(1), columns).view(), *k)
            }
        }
    }
}

/// Largest `|x_j · (y - ȳ)|`, used when a selection step keeps nothing.
fn strongest_column(x: ArrayView2<'_, f64>, y: &[u8]) -> usize {
    let ybar = y.iter().map(|&v| f64::from(v)).sum::<f64>() / y.len() as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for (j, col) in x.columns().into_iter().enumerate() {
        let g = col.iter().zip(y).map(|(v, &t)| v * (f64::from(t) - ybar)).sum::<f64>().abs();
        if g > best.1 {
            best = (j, g);
        }
    }
    best.0
}

/// Column subsets chosen by elastic-net selection along `lambdas`
/// (warm-started, strongest first). A selection that keeps nothing falls
/// back to the single most label-correlated column.
fn selections(x: ArrayView2<'_, f64>, y: &[u8], spec: &ModelSpec) -> Result<Vec<Vec<usize>>> {
    if spec.selection_lambdas.is_empty() || x.ncols() == 0 {
        let all: Vec<usize> = (0..x.ncols()).collect();
        return Ok(vec![all; spec.selection_lambdas.len().max(1)]);
    }
    let mut warm: Option<LinearModel> = None;
    let mut out = Vec::with_capacity(spec.selection_lambdas.len());
    for &lambda in &spec.selection_lambdas {
        let params = ElasticNetParams::new(lambda, spec.selection_rho);
        let model = logistic::fit(x, y, &params, warm.as_ref())?;
        let mut support = model.support();
        if support.is_empty() {
            support.push(strongest_column(x, y));
        }
        out.push(support);
        warm = Some(model);
    }
    Ok(out)
}

fn fit_one(
    x: ArrayView2<'_, f64>,
    y: &[u8],
    columns: &[usize],
    hyper: &Hyper,
    warm: Option<&LinearModel>,
) -> Result<Option<Fitted>> {
    let sub = x.select(Axis(1), columns);
    let columns = columns.to_vec();
    Ok(Some(match *hyper {
        Hyper::Logistic { lambda, rho } => Fitted::Linear {
            model: logistic::fit(sub.view(), y, &ElasticNetParams::new(lambda, rho), warm)?,
            columns,
        },
        Hyper::Svm { c } => Fitted::Linear {
            model: svm::fit(sub.view(), y, &SvmParams::new(c))?,
            columns,
        },
        Hyper::Knn { k } => {
            if k > y.len() {
                return Ok(None);
            }
            Fitted::Knn { x: sub, y: y.to_vec(), k, columns }
        }
    }))
}

/// Fits every candidate of `spec`, in candidate order. `None` marks a
/// candidate that cannot be fit on this data (kNN with `k` above the row
/// count).
pub fn fit_all(x: ArrayView2<'_, f64>, y: &[u8], spec: &ModelSpec) -> Result<Vec<Option<Fitted>>> {
    let mut out = Vec::with_capacity(spec.candidates());
    for columns in selections(x, y, spec)? {
        let mut previous: Option<(f64, LinearModel)> = None;
        for hyper in &spec.grid {
            // consecutive logistic points with equal rho continue the path
            let warm = match (hyper, &previous) {
                (Hyper::Logistic { rho, .. }, Some((r, m))) if r == rho => Some(m),
                _ => None,
            };
            let fitted = fit_one(x, y, &columns, hyper, warm)?;
            previous = match (hyper, &fitted) {
                (Hyper::Logistic { rho, .. }, Some(Fitted::Linear { model, .. })) => Some((*rho, model.clone())),
                _ => None,
            };
            out.push(fitted);
        }
    }
    Ok(out)
}

/// Fits candidate `candidate` of `spec` alone.
pub fn fit_candidate(x: ArrayView2<'_, f64>, y: &[u8], spec: &ModelSpec, candidate: usize) -> Result<Option<Fitted>> {
    let (s, g) = (candidate / spec.grid.len(), candidate % spec.grid.len());
    let columns = if spec.selection_lambdas.is_empty() || x.ncols() == 0 {
        (0..x.ncols()).collect()
    } else {
        let one = ModelSpec {
            selection_lambdas: vec![spec.selection_lambdas[s]],
            ..spec.clone()
        };
        selections(x, y, &one)?.remove(0)
    };
    fit_one(x, y, &columns, &spec.grid[g], None)
}
