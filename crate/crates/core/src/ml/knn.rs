use ndarray::ArrayView2;

use crate::error::{Error, Result};

use super::FeatureMatrix;

/// Labels and positive-neighbour fractions for each query row.
///
/// Distances are Euclidean; equal distances go to the lower training row.
/// A tied vote goes to the class of the single nearest neighbour.
pub(crate) fn predict(
    train: ArrayView2<'_, f64>,
    labels: &[u8],
    query: ArrayView2<'_, f64>,
    k: usize,
) -> Result<(Vec<u8>, Vec<f64>)> {
    if train.nrows() == 0 {
        return Err(Error::invalid("kNN needs a non-empty training set"));
    }
    if k == 0 || k > train.nrows() {
        return Err(Error::invalid(format!(
            "k = {k} must be in 1..={}",
            train.nrows()
        )));
    }
    if query.ncols() != train.ncols() {
        return Err(Error::invalid("query and training rows differ in width"));
    }
    let mut predicted = Vec::with_capacity(query.nrows());
    let mut scores = Vec::with_capacity(query.nrows());
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(train.nrows());
    for q in query.rows() {
        dist.clear();
        dist.extend(train.rows().into_iter().enumerate().map(|(i, r)| {
            (r.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i)
        }));
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let pos = dist[..k].iter().filter(|(_, i)| labels[*i] == 1).count();
        let label = match (2 * pos).cmp(&k) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => labels[dist[0].1],
        };
        predicted.push(label);
        scores.push(pos as f64 / k as f64);
    }
    Ok((predicted, scores))
}

/// k-nearest-neighbour classification of `query` against `train`.
pub fn knn(train: &FeatureMatrix, query: ArrayView2<'_, f64>, k: usize) -> Result<(Vec<u8>, Vec<f64>)> {
    predict(train.data(), train.labels(), query, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn xor_is_misclassified_with_three_neighbours() {
        let x = array![[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
        let y = [0, 0, 1, 1];
        let (pred, _) = predict(x.view(), &y, x.view(), 3).unwrap();
        for (p, t) in pred.iter().zip(&y) {
            assert_ne!(p, t);
        }
    }

    #[test]
    fn one_neighbour_recovers_training_label() {
        let x = array![[0.0], [5.0], [9.0]];
        let y = [1, 0, 1];
        let (pred, scores) = predict(x.view(), &y, x.view(), 1).unwrap();
        assert_eq!(pred, y);
        assert_eq!(scores, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn all_neighbours_gives_majority() {
        let x = array![[0.0], [1.0], [2.0], [3.0], [4.0]];
        let y = [1, 0, 1, 1, 0];
        let q = array![[-10.0], [2.0], [100.0]];
        let (pred, _) = predict(x.view(), &y, q.view(), 5).unwrap();
        assert_eq!(pred, vec![1, 1, 1]);
    }

    #[test]
    fn tied_vote_follows_nearest() {
        let x = array![[0.0], [1.0], [10.0], [11.0]];
        let y = [0, 1, 1, 0];
        let (pred, _) = predict(x.view(), &y, array![[0.4]].view(), 2).unwrap();
        assert_eq!(pred, vec![0]);
        let (pred, _) = predict(x.view(), &y, array![[0.6]].view(), 2).unwrap();
        assert_eq!(pred, vec![1]);
    }

    #[test]
    fn errors() {
        let x = array![[0.0], [1.0]];
        assert!(predict(x.view(), &[0, 1], x.view(), 0).is_err());
        assert!(predict(x.view(), &[0, 1], x.view(), 3).is_err());
        let empty = ndarray::Array2::<f64>::zeros((0, 1));
        assert!(predict(empty.view(), &[], x.view(), 1).is_err());
    }
}
