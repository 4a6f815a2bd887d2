use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ml::{ClassifierKind, CvOutcome, Metrics};
use crate::sig::MultiIndex;

use super::{Exclusion, PipelineConfig};

/// Version of the JSON report layout.
pub const REPORT_FORMAT: u32 = 1;

const FEATURE_COUNT_NOTE: &str = "Total feature counts are every non-constant signature term of the \
embedded path (12, 39 and 120 for a 3-dimensional path at depths 2, 3 and 4). The reference table \
shipped with the tests lists 7, 23 and 74 without saying which terms were left out; no pruning rule \
is applied here.";

const PAPER_MODE_NOTE: &str = "Standardization and oversampling were fit on the whole data set before \
splitting, so test folds contain synthetic rows built from their own neighbours. These metrics are \
optimistic.";

/// Metrics and feature counts for one classifier at one depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub classifier: ClassifierKind,
    pub depth: usize,
    pub metrics: Metrics,
    pub selected_count: usize,
    pub total_features: usize,
    pub selected_features: Vec<MultiIndex>,
    /// Non-constant columns on the full data.
    pub usable_features: usize,
    pub n_synthetic: usize,
    pub fold_choices: Vec<String>,
    pub final_choice: String,
}

impl ClassificationReport {
    pub fn new(classifier: ClassifierKind, depth: usize, total_features: usize, outcome: CvOutcome) -> Self {
        ClassificationReport {
            classifier,
            depth,
            metrics: outcome.metrics,
            selected_count: outcome.selected_features.len(),
            total_features,
            selected_features: outcome.selected_features,
            usable_features: outcome.usable_features,
            n_synthetic: outcome.n_synthetic,
            fold_choices: outcome.fold_choices,
            final_choice: outcome.final_choice,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format: u32,
    pub config: PipelineConfig,
    pub subjects: usize,
    pub class_counts: [usize; 2],
    pub excluded: Vec<Exclusion>,
    /// Classifier-major, depths ascending within a classifier.
    pub results: Vec<ClassificationReport>,
    pub notes: Vec<String>,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}"))
}

impl ExperimentReport {
    pub(crate) fn new(
        config: &PipelineConfig,
        subjects: usize,
        class_counts: [usize; 2],
        excluded: Vec<Exclusion>,
        results: Vec<ClassificationReport>,
    ) -> Self {
        let mut notes = vec![FEATURE_COUNT_NOTE.to_string()];
        if !config.cv.smote_inside_folds {
            notes.push(PAPER_MODE_NOTE.to_string());
        }
        ExperimentReport {
            format: REPORT_FORMAT,
            config: config.clone(),
            subjects,
            class_counts,
            excluded,
            results,
            notes,
        }
    }

    pub fn get(&self, classifier: ClassifierKind, depth: usize) -> Option<&ClassificationReport> {
        self.results.iter().find(|r| r.classifier == classifier && r.depth == depth)
    }

    /// Plain-text table: one column per (classifier, depth), rows for the
    /// feature counts and the six metrics.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<Vec<String>> = vec![
            vec!["Classifier".into()],
            vec!["Signature depth".into()],
            vec!["number of features".into()],
        ];
        let labels = ["sensitivity", "specificity", "accuracy", "f1-score", "AUC", "Cohen's kappa"];
        rows.extend(labels.iter().map(|l| vec![l.to_string()]));
        for r in &self.results {
            rows[0].push(r.classifier.title().to_string());
            rows[1].push(format!("L={}", r.depth));
            rows[2].push(format!("{} ({})", r.selected_count, r.total_features));
            for (row, v) in rows[3..].iter_mut().zip(r.metrics.values()) {
                row.push(cell(v));
            }
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, row) in rows.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, w))| if c == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            let line = line.join(" | ");
            let _ = writeln!(out, "{}", line.trim_end());
            if i == 2 {
                let _ = writeln!(out, "{}", "-".repeat(line.chars().count()));
            }
        }
        let _ = writeln!(
            out,
            "\n{} subjects ({} in class 0, {} in class 1), {} excluded",
            self.subjects,
            self.class_counts[0],
            self.class_counts[1],
            self.excluded.len()
        );
        for e in &self.excluded {
            let _ = writeln!(out, "  excluded {}: {}", e.id, e.reason);
        }
        for r in &self.results {
            let feats: Vec<String> = r.selected_features.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{} L={}: {{{}}} via {}", r.classifier, r.depth, feats.join(" "), r.final_choice);
        }
        for n in &self.notes {
            let _ = writeln!(out, "\nNote: {n}");
        }
        out
    }
}
