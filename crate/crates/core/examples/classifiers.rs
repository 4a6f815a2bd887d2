//! Elastic-net logistic regression, a linear SVM and kNN on one
//! standardized matrix where only the first column carries signal.

use ndarray::Array2;
use rand_distr::{Distribution, StandardNormal};
use sigstream::ml::{elastic_net_logistic, knn, linear_svm, metrics, FeatureMatrix};
use sigstream::rng::stream;
use sigstream::sig::MultiIndex;

fn main() -> sigstream::Result<()> {
    let mut r = stream(5, "example", &[]);
    let y: Vec<u8> = (0..40).map(|i| u8::from(i % 2 == 1)).collect();
    let x = Array2::from_shape_fn((40, 5), |(i, j)| {
        let z: f64 = StandardNormal.sample(&mut r);
        z + if j == 0 { 2.5 * f64::from(y[i]) } else { 0.0 }
    });
    let names = (1..=5).map(|i| MultiIndex::new(vec![i])).collect::<Result<_, _>>()?;
    let (fm, _) = FeatureMatrix::new(x, names, y.clone())?.standardize()?;

    let model = elastic_net_logistic(&fm, 0.1, 0.5)?;
    let kept: Vec<String> = model.support().iter().map(|&j| fm.columns()[j].to_string()).collect();
    println!("logistic keeps {kept:?}, weights {:.3?}", model.weights);

    let svm = linear_svm(&fm, 1.0)?;
    let pred: Vec<u8> = svm.scores.iter().map(|&s| u8::from(s >= 0.0)).collect();
    println!("svm training accuracy {:?}", metrics(&y, &pred, &svm.scores)?.accuracy);

    let (pred, scores) = knn(&fm, fm.data(), 3)?;
    println!("3-nn training accuracy {:?}", metrics(&y, &pred, &scores)?.accuracy);
    Ok(())
}
