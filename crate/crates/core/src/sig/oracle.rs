//! Brute-force evaluation of single iterated integrals.
//!
//! Along a linear segment `x(s) = x_0 + s Δ`, `s ∈ [0, 1]`, each prefix
//! integral `S^{(i_1..i_m)}(s)` is a polynomial in `s`, obtained from the
//! previous prefix by exact antidifferentiation:
//!
//! ```text
//! q_0(s) = 1
//! q_m(s) = S^{(i_1..i_m)}(start) + Δ_{i_m} ∫_0^s q_{m-1}(u) du
//! ```
//!
//! This never forms tensor products, so it is independent of
//! [`signature`](super::signature).

use crate::error::Result;

use super::tensor::check_shape;
use super::{MultiIndex, Path, TruncatedSignature};

/// `S^I` of `path` by per-segment polynomial integration.
pub fn signature_oracle(path: &Path, index: &MultiIndex) -> Result<f64> {
    index.check_dimension(path.dimension())?;
    let letters = index.letters();
    let k = letters.len();
    // prefix[m] = S^{(i_1..i_m)} at the current point; prefix[0] = 1.
    let mut prefix = vec![0.0; k + 1];
    prefix[0] = 1.0;
    let mut q_prev: Vec<f64> = Vec::with_capacity(k + 1);
    let mut q_cur: Vec<f64> = Vec::with_capacity(k + 1);
    for inc in path.increments() {
        q_prev.clear();
        q_prev.push(1.0);
        for m in 1..=k {
            let slope = inc[letters[m - 1] - 1];
            q_cur.clear();
            q_cur.push(prefix[m]);
            q_cur.extend(q_prev.iter().enumerate().map(|(j, c)| slope * c / (j + 1) as f64));
            std::mem::swap(&mut q_prev, &mut q_cur);
            // q_prev is now q_m
            prefix[m] = q_prev.iter().sum();
        }
    }
    Ok(prefix[k])
}

/// Every coefficient up to `depth` via [`signature_oracle`].
pub fn signature_oracle_full(path: &Path, depth: usize) -> Result<TruncatedSignature> {
    check_shape(path.dimension(), depth)?;
    let mut coeffs = vec![1.0];
    for index in MultiIndex::graded(path.dimension(), depth) {
        coeffs.push(signature_oracle(path, &index)?);
    }
    TruncatedSignature::from_coefficients(path.dimension(), depth, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_second_level() {
        let p = Path::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let v = signature_oracle(&p, &MultiIndex::new(vec![1, 2]).unwrap()).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn first_level_is_increment() {
        let p = Path::new(vec![vec![1.0, 2.0], vec![4.0, -1.0], vec![0.5, 3.0]]).unwrap();
        let x = signature_oracle(&p, &MultiIndex::new(vec![1]).unwrap()).unwrap();
        let y = signature_oracle(&p, &MultiIndex::new(vec![2]).unwrap()).unwrap();
        assert_eq!(x, 0.5 - 1.0);
        assert_eq!(y, 3.0 - 2.0);
    }

    #[test]
    fn right_angle_path() {
        let p = Path::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s12 = signature_oracle(&p, &MultiIndex::new(vec![1, 2]).unwrap()).unwrap();
        let s21 = signature_oracle(&p, &MultiIndex::new(vec![2, 1]).unwrap()).unwrap();
        assert_eq!(s12, 1.0);
        assert_eq!(s21, 0.0);
    }

    #[test]
    fn letter_above_dimension() {
        let p = Path::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(signature_oracle(&p, &MultiIndex::new(vec![3]).unwrap()).is_err());
    }
}
