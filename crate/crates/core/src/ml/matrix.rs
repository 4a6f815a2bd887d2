use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::sig::MultiIndex;

/// Feature rows per subject, with binary labels and multi-index column names.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Array2<f64>,
    columns: Vec<MultiIndex>,
    labels: Vec<u8>,
    ids: Vec<String>,
    standardized: bool,
    dropped: Vec<MultiIndex>,
}

impl FeatureMatrix {
    pub fn new(data: Array2<f64>, columns: Vec<MultiIndex>, labels: Vec<u8>) -> Result<Self> {
        let ids = (0..data.nrows()).map(|i| i.to_string()).collect();
        Self::with_ids(data, columns, labels, ids)
    }

    pub fn with_ids(
        data: Array2<f64>,
        columns: Vec<MultiIndex>,
        labels: Vec<u8>,
        ids: Vec<String>,
    ) -> Result<Self> {
        if columns.len() != data.ncols() {
            return Err(Error::invalid(format!(
                "{} column names for {} columns",
                columns.len(),
                data.ncols()
            )));
        }
        if labels.len() != data.nrows() || ids.len() != data.nrows() {
            return Err(Error::invalid(format!(
                "{} rows but {} labels and {} ids",
                data.nrows(),
                labels.len(),
                ids.len()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::invalid("labels must be 0 or 1"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("feature matrix contains non-finite values"));
        }
        Ok(FeatureMatrix {
            data,
            columns,
            labels,
            ids,
            standardized: false,
            dropped: Vec::new(),
        })
    }

    pub fn data(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn columns(&self) -> &[MultiIndex] {
        &self.columns
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    /// Columns removed for having zero variance during standardization.
    pub fn dropped(&self) -> &[MultiIndex] {
        &self.dropped
    }

    /// Column-standardized copy. Zero-variance columns are removed and
    /// recorded in [`FeatureMatrix::dropped`].
    pub fn standardize(&self) -> Result<(FeatureMatrix, Standardizer)> {
        let scaler = Standardizer::fit(self.data.view())?;
        let data = scaler.transform(self.data.view());
        let columns = scaler.kept.iter().map(|&j| self.columns[j].clone()).collect();
        let mut dropped = self.dropped.clone();
        dropped.extend(scaler.dropped().map(|j| self.columns[j].clone()));
        if !dropped.is_empty() {
            log::info!(
                "dropped {} zero-variance feature(s): {}",
                dropped.len(),
                dropped.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            );
        }
        Ok((
            FeatureMatrix {
                data,
                columns,
                labels: self.labels.clone(),
                ids: self.ids.clone(),
                standardized: true,
                dropped,
            },
            scaler,
        ))
    }

    /// Marks the matrix as already standardized by the caller.
    pub fn assume_standardized(mut self) -> Self {
        self.standardized = true;
        self
    }

    /// Rows `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            data: self.data.select(Axis(0), rows),
            columns: self.columns.clone(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            ids: rows.iter().map(|&r| self.ids[r].clone()).collect(),
            standardized: self.standardized,
            dropped: self.dropped.clone(),
        }
    }

    pub fn class_counts(&self) -> [usize; 2] {
        class_counts(&self.labels)
    }
}

pub(crate) fn class_counts(labels: &[u8]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    [labels.len() - ones, ones]
}

/// Per-column mean and sample standard deviation fitted on one matrix and
/// applicable to others.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Array1<f64>,
    std: Array1<f64>,
    kept: Vec<usize>,
}

impl Standardizer {
    /// Fits on the rows of `x`. A column counts as constant when its sample
    /// standard deviation is at most `1e-10` times its largest magnitude.
    pub fn fit(x: ArrayView2<'_, f64>) -> Result<Self> {
        let n = x.nrows();
        if n < 2 {
            return Err(Error::invalid("standardization needs at least 2 rows"));
        }
        let mean = x.mean_axis(Axis(0)).expect("non-empty");
        let mut std = Array1::zeros(x.ncols());
        let mut kept = Vec::new();
        for (j, col) in x.axis_iter(Axis(1)).enumerate() {
            let m = mean[j];
            let ss: f64 = col.iter().map(|v| (v - m) * (v - m)).sum();
            let s = (ss / (n - 1) as f64).sqrt();
            let scale = col.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            std[j] = s;
            if scale > 0.0 && s > 1e-10 * scale {
                kept.push(j);
            }
        }
        Ok(Standardizer { mean, std, kept })
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn dropped(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.mean.len()).filter(|j| !self.kept.contains(j))
    }

    /// Standardizes the kept columns of `x`.
    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut out = Array2::zeros((x.nrows(), self.kept.len()));
        for (k, &j) in self.kept.iter().enumerate() {
            let (m, s) = (self.mean[j], self.std[j]);
            out.column_mut(k)
                .iter_mut()
                .zip(x.column(j))
                .for_each(|(o, v)| *o = (v - m) / s);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn names(n: usize) -> Vec<MultiIndex> {
        (1..=n).map(|i| MultiIndex::new(vec![i]).unwrap()).collect()
    }

    #[test]
    fn standardized_columns_have_zero_mean_unit_std() {
        let x = array![[1.0, 10.0, 3.0], [2.0, 20.0, 3.0], [4.0, 15.0, 3.0], [7.0, 5.0, 3.0]];
        let fm = FeatureMatrix::new(x, names(3), vec![0, 1, 0, 1]).unwrap();
        let (s, scaler) = fm.standardize().unwrap();
        assert_eq!(s.ncols(), 2);
        assert_eq!(s.dropped(), &[MultiIndex::new(vec![3]).unwrap()]);
        assert_eq!(scaler.kept(), &[0, 1]);
        for col in s.data().axis_iter(Axis(1)) {
            let m = col.mean().unwrap();
            let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 3.0).sqrt();
            assert!(m.abs() <= 1e-9);
            assert!((sd - 1.0).abs() <= 1e-9);
        }
        assert!(s.is_standardized());
    }

    #[test]
    fn idempotent() {
        let x = array![[1.0, -3.0], [2.5, 0.0], [4.0, 1.5], [-7.0, 5.0], [0.1, 0.2]];
        let fm = FeatureMatrix::new(x, names(2), vec![0, 1, 0, 1, 1]).unwrap();
        let (once, _) = fm.standardize().unwrap();
        let (twice, _) = once.standardize().unwrap();
        let diff = (&once.data() - &twice.data()).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(diff <= 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FeatureMatrix::new(array![[1.0]], names(2), vec![0]).is_err());
        assert!(FeatureMatrix::new(array![[1.0]], names(1), vec![0, 1]).is_err());
        assert!(FeatureMatrix::new(array![[1.0]], names(1), vec![2]).is_err());
        assert!(FeatureMatrix::new(array![[f64::NAN]], names(1), vec![1]).is_err());
        let one = FeatureMatrix::new(array![[1.0]], names(1), vec![1]).unwrap();
        assert!(one.standardize().is_err());
    }
}
