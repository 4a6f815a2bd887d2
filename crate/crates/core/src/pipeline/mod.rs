//! End-to-end experiments: ingest streams, embed, take signatures and run
//! nested cross-validation for each classifier and depth.

mod report;
mod synth;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embeddings::{embed, EmbeddingConfig, StreamRecord};
use crate::error::{Error, Result};
use crate::ml::{nested_cv, ClassifierKind, CvConfig, FeatureMatrix, ModelSpec, Standardizer};
use crate::sig::{signature, term_count, MultiIndex, MAX_DEPTH};

pub use report::{ClassificationReport, ExperimentReport, REPORT_FORMAT};
pub use synth::{synth_generate, SynthConfig, MAX_MISSING_PROB};

/// Longest run of missing entries a subject may have and still be kept.
pub const MAX_CONSECUTIVE_MISSING: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub depths: Vec<usize>,
    pub embedding: EmbeddingConfig,
    /// Its `seed` is replaced by [`PipelineConfig::seed`].
    pub cv: CvConfig,
    pub classifiers: Vec<ClassifierKind>,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            depths: vec![2, 3, 4],
            embedding: EmbeddingConfig::delay(),
            cv: CvConfig::default(),
            classifiers: ClassifierKind::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depths.is_empty() {
            return Err(Error::config("at least one depth is required"));
        }
        if let Some(d) = self.depths.iter().find(|d| !(1..=MAX_DEPTH).contains(*d)) {
            return Err(Error::config(format!("depth {d} outside 1..={MAX_DEPTH}")));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config("at least one classifier is required"));
        }
        let mut seen = self.classifiers.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.classifiers.len() {
            return Err(Error::config("classifiers are listed more than once"));
        }
        self.embedding.validate()?;
        self.cv.validate()
    }

    fn cv_config(&self) -> CvConfig {
        CvConfig {
            seed: self.seed,
            ..self.cv.clone()
        }
    }
}

/// A subject left out at ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub records: Vec<StreamRecord>,
    pub excluded: Vec<Exclusion>,
}

/// Validates records and drops subjects with more than
/// [`MAX_CONSECUTIVE_MISSING`] consecutive missing entries.
///
/// Malformed records, duplicate ids and streams starting with a missing
/// entry are errors rather than exclusions.
pub fn ingest(records: &[StreamRecord]) -> Result<Ingested> {
    let mut ids = std::collections::HashSet::new();
    let mut kept = Vec::with_capacity(records.len());
    let mut excluded = Vec::new();
    for r in records {
        if !ids.insert(r.id.as_str()) {
            return Err(Error::Record {
                id: r.id.clone(),
                reason: "duplicate subject id".into(),
            });
        }
        r.validate_leading()?;
        let run = r.max_consecutive_missing();
        if run > MAX_CONSECUTIVE_MISSING {
            let reason = format!("{run} consecutive missing entries (limit {MAX_CONSECUTIVE_MISSING})");
            log::info!("excluding {}: {reason}", r.id);
            excluded.push(Exclusion { id: r.id.clone(), reason });
        } else {
            kept.push(r.clone());
        }
    }
    Ok(Ingested { records: kept, excluded })
}

/// Raw signature rows, constant term excluded, one per record. Columns are
/// every multi-index up to `depth` in graded-lex order.
pub fn signature_rows(
    records: &[StreamRecord],
    embedding: &EmbeddingConfig,
    depth: usize,
) -> Result<(Array2<f64>, Vec<MultiIndex>)> {
    embedding.validate()?;
    let d = embedding.dimension();
    let columns: Vec<MultiIndex> = MultiIndex::graded(d, depth).collect();
    let rows: Vec<Vec<f64>> = records
        .par_iter()
        .map(|r| {
            let path = embed(r, embedding)?;
            let sig = signature(&path, depth).map_err(|e| Error::Record {
                id: r.id.clone(),
                reason: e.to_string(),
            })?;
            Ok(sig.features().to_vec())
        })
        .collect::<Result<_>>()?;
    let mut data = Array2::zeros((records.len(), columns.len()));
    for (mut out, row) in data.rows_mut().into_iter().zip(rows) {
        out.iter_mut().zip(row).for_each(|(o, v)| *o = v);
    }
    Ok((data, columns))
}

fn labels_of(records: &[StreamRecord]) -> Result<Vec<u8>> {
    records
        .iter()
        .map(|r| {
            r.label.ok_or_else(|| Error::Record {
                id: r.id.clone(),
                reason: "missing class label".into(),
            })
        })
        .collect()
}

/// Labeled signature features before standardization.
pub fn signature_features(records: &[StreamRecord], embedding: &EmbeddingConfig, depth: usize) -> Result<FeatureMatrix> {
    let (data, columns) = signature_rows(records, embedding, depth)?;
    let ids = records.iter().map(|r| r.id.clone()).collect();
    FeatureMatrix::with_ids(data, columns, labels_of(records)?, ids)
}

/// Labeled, column-standardized signature features. Constant columns are
/// dropped and listed in [`FeatureMatrix::dropped`].
pub fn featurize(records: &[StreamRecord], embedding: &EmbeddingConfig, depth: usize) -> Result<FeatureMatrix> {
    Ok(signature_features(records, embedding, depth)?.standardize()?.0)
}

/// Standardized signature rows for possibly unlabeled records, with the
/// kept and the dropped (constant) column names.
pub fn featurize_unlabeled(
    records: &[StreamRecord],
    embedding: &EmbeddingConfig,
    depth: usize,
) -> Result<(Array2<f64>, Vec<MultiIndex>, Vec<MultiIndex>)> {
    let (data, columns) = signature_rows(records, embedding, depth)?;
    let scaler = Standardizer::fit(data.view())?;
    let kept = scaler.kept().iter().map(|&j| columns[j].clone()).collect();
    let dropped = scaler.dropped().map(|j| columns[j].clone()).collect();
    Ok((scaler.transform(data.view()), kept, dropped))
}

/// Runs nested cross-validation for every configured classifier and depth.
///
/// Errors carry the stage they come from.
pub fn run_experiment(records: &[StreamRecord], config: &PipelineConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let ingested = ingest(records).map_err(|e| e.at_stage("ingest"))?;
    let labels = labels_of(&ingested.records).map_err(|e| e.at_stage("ingest"))?;
    let ones = labels.iter().filter(|&&l| l == 1).count();
    let counts = [labels.len() - ones, ones];
    if counts.contains(&0) {
        return Err(Error::config("both classes must be present after ingestion").at_stage("ingest"));
    }
    let cv = config.cv_config();
    let mut results = Vec::with_capacity(config.depths.len() * config.classifiers.len());
    let mut by_depth = Vec::with_capacity(config.depths.len());
    for &depth in &config.depths {
        let fm = signature_features(&ingested.records, &config.embedding, depth).map_err(|e| e.at_stage("featurize"))?;
        by_depth.push((depth, fm));
    }
    for &kind in &config.classifiers {
        let spec = ModelSpec::default_for(kind);
        for (depth, fm) in &by_depth {
            let outcome = nested_cv(fm, &spec, &cv).map_err(|e| e.at_stage("cross-validation"))?;
            results.push(ClassificationReport::new(
                kind,
                *depth,
                term_count(config.embedding.dimension(), *depth),
                outcome,
            ));
        }
    }
    Ok(ExperimentReport::new(config, ingested.records.len(), counts, ingested.excluded, results))
}
