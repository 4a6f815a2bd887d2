//! Truncated path signatures for discrete, possibly incomplete data streams,
//! and a seeded classification pipeline that consumes them.
//!
//! The crate is organised bottom-up:
//!
//! - [`sig`]: paths, multi-indices, the truncated tensor algebra, exact
//!   signatures of piecewise-linear paths, shuffle products and an
//!   independent polynomial-integration oracle.
//! - [`embeddings`]: turning streams into paths (axis, linear, lead-lag,
//!   missing-data lift, delay paths).
//! - [`ml`]: standardization, SMOTE/ADASYN, elastic-net logistic
//!   regression, linear SVM, kNN, metrics and nested stratified
//!   cross-validation.
//! - [`pipeline`]: featurization, the synthetic delay generator and the
//!   end-to-end experiment.
//! - [`cli`]: file formats, reports and the command implementations used by
//!   the `sigstream` binary.
//!
//! ```
//! use sigstream::sig::{signature, Path, MultiIndex};
//!
//! let path = Path::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
//! let sig = signature(&path, 2).unwrap();
//! assert_eq!(sig.get(&MultiIndex::new(vec![1, 2]).unwrap()), Some(1.0));
//! ```

pub mod cli;
pub mod embeddings;
mod error;
pub mod ml;
pub mod pipeline;
pub mod rng;
pub mod sig;

pub use error::{Error, Result};
