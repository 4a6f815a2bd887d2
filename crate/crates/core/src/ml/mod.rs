//! Standardization, oversampling, classifiers, metrics and nested
//! cross-validation for binary signature features.

pub mod cv;
mod knn;
mod linear;
pub mod logistic;
mod matrix;
mod metrics;
pub mod model;
pub mod oversample;
pub mod svm;

pub use knn::knn;
pub use linear::LinearModel;
pub use logistic::{elastic_net_logistic, ElasticNetParams};
pub use matrix::{FeatureMatrix, Standardizer};
pub use metrics::{auc, metrics, Confusion, Metrics};
pub use oversample::{adasyn, balance, smote, OversampleConfig, Strategy};
pub use svm::{linear_svm, SvmFit, SvmParams};
pub use cv::{nested_cv, stratified_folds, CvConfig, CvOutcome, FoldAudit, Prediction};
pub use model::{default_grid, logspace, ClassifierKind, Fitted, Hyper, ModelSpec};
