//! Truncated signatures of piecewise-linear paths.
//!
//! The signature of a path is built by folding the tensor exponentials of
//! its segment increments with the truncated tensor product (Chen's
//! identity). [`signature_oracle`] evaluates single coefficients by direct
//! polynomial integration and serves as an independent check.

mod multi_index;
mod oracle;
mod path;
mod shuffle;
mod tensor;

pub use multi_index::MultiIndex;
pub use oracle::{signature_oracle, signature_oracle_full};
pub use path::Path;
pub use shuffle::{shuffle, ShuffleExpansion};
pub use tensor::{term_count, TruncatedSignature, MAX_DEPTH};

use crate::error::{Error, Result};

/// Truncated signature of `path` up to level `depth`.
pub fn signature(path: &Path, depth: usize) -> Result<TruncatedSignature> {
    let mut acc = TruncatedSignature::identity(path.dimension(), depth)?;
    for inc in path.increments() {
        let seg = TruncatedSignature::segment(&inc, depth)?;
        acc.mul_assign_unchecked(&seg);
    }
    if acc.coefficients().iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("signature overflowed to a non-finite value"));
    }
    Ok(acc)
}

/// Signature of the concatenation of the paths with signatures `a` then `b`.
pub fn chen_product(a: &TruncatedSignature, b: &TruncatedSignature) -> Result<TruncatedSignature> {
    a.tensor_product(b)
}

/// Signed (Lévy) area in the `(i, j)` plane: `½ (S^{(i,j)} - S^{(j,i)})`.
/// Axes are 1-based.
pub fn signed_area(sig: &TruncatedSignature, i: usize, j: usize) -> Result<f64> {
    let d = sig.dimension();
    if i == j || i == 0 || j == 0 || i > d || j > d {
        return Err(Error::InvalidAxes { i, j, dimension: d });
    }
    if sig.depth() < 2 {
        return Err(Error::invalid("signed area needs depth at least 2"));
    }
    let ij = sig.get(&MultiIndex::new(vec![i, j])?).expect("in range");
    let ji = sig.get(&MultiIndex::new(vec![j, i])?).expect("in range");
    Ok(0.5 * (ij - ji))
}
