use crate::error::{Error, Result};

use super::MultiIndex;

/// Deepest truncation level accepted anywhere in the crate.
pub const MAX_DEPTH: usize = 10;

/// Upper bound on stored coefficients, to fail early instead of exhausting
/// memory for large `d^L`.
const MAX_TERMS: usize = 1 << 26;

/// Number of non-constant coefficients of a depth-`depth` truncated
/// signature in `dimension` dimensions: `d + d^2 + ... + d^L`.
///
/// Saturates at `usize::MAX`.
pub fn term_count(dimension: usize, depth: usize) -> usize {
    let mut total: usize = 0;
    let mut power: usize = 1;
    for _ in 0..depth {
        power = power.saturating_mul(dimension);
        total = total.saturating_add(power);
    }
    total
}

/// Start of level `k` in the flat coefficient array (level 0 is the
/// constant term at position 0).
fn level_offset(dimension: usize, k: usize) -> usize {
    match k {
        0 => 0,
        _ => 1 + term_count(dimension, k - 1),
    }
}

pub(crate) fn check_shape(dimension: usize, depth: usize) -> Result<()> {
    if dimension == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if depth == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    if depth > MAX_DEPTH {
        return Err(Error::invalid(format!(
            "depth {depth} exceeds the maximum of {MAX_DEPTH}"
        )));
    }
    if term_count(dimension, depth) > MAX_TERMS {
        return Err(Error::invalid(format!(
            "dimension {dimension} at depth {depth} needs {} coefficients",
            term_count(dimension, depth)
        )));
    }
    Ok(())
}

/// A truncated group-like element of the tensor algebra: the constant term,
/// then levels `1..=depth` each stored in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSignature {
    dimension: usize,
    depth: usize,
    coeffs: Vec<f64>,
}

impl TruncatedSignature {
    /// The signature of a constant path: `(1, 0, 0, ...)`.
    pub fn identity(dimension: usize, depth: usize) -> Result<Self> {
        check_shape(dimension, depth)?;
        let mut coeffs = vec![0.0; 1 + term_count(dimension, depth)];
        coeffs[0] = 1.0;
        Ok(TruncatedSignature {
            dimension,
            depth,
            coeffs,
        })
    }

    /// Truncated tensor exponential of `increment`, the signature of the
    /// straight segment with that increment. Level `k` holds
    /// `increment^{⊗k} / k!`.
    pub fn segment(increment: &[f64], depth: usize) -> Result<Self> {
        let mut out = Self::identity(increment.len(), depth)?;
        let d = out.dimension;
        out.coeffs[1..=d].copy_from_slice(increment);
        for k in 2..=depth {
            let (lower, upper) = out.coeffs.split_at_mut(level_offset(d, k));
            let prev = &lower[level_offset(d, k - 1)..];
            let cur = &mut upper[..d.pow(k as u32)];
            let scale = 1.0 / k as f64;
            for (p, &pv) in prev.iter().enumerate() {
                for (i, &inc) in increment.iter().enumerate() {
                    cur[p * d + i] = pv * inc * scale;
                }
            }
        }
        Ok(out)
    }

    /// Builds a signature from its full coefficient vector (constant first).
    pub fn from_coefficients(dimension: usize, depth: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_shape(dimension, depth)?;
        if coeffs.len() != 1 + term_count(dimension, depth) {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                1 + term_count(dimension, depth),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite signature coefficient"));
        }
        Ok(TruncatedSignature {
            dimension,
            depth,
            coeffs,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// All coefficients, constant term first.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients without the constant term.
    pub fn features(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    /// Coefficients of level `k` (level 0 is the constant term).
    pub fn level(&self, k: usize) -> &[f64] {
        assert!(k <= self.depth, "level {k} above depth {}", self.depth);
        let start = level_offset(self.dimension, k);
        &self.coeffs[start..start + self.dimension.pow(k as u32)]
    }

    fn position(&self, index: &MultiIndex) -> Option<usize> {
        if index.len() > self.depth || index.letters().iter().any(|&l| l > self.dimension) {
            return None;
        }
        let within = index
            .letters()
            .iter()
            .fold(0, |acc, &l| acc * self.dimension + (l - 1));
        Some(level_offset(self.dimension, index.len()) + within)
    }

    /// The coefficient `S^I`, or `None` when `I` is longer than the depth or
    /// uses a letter above the dimension.
    pub fn get(&self, index: &MultiIndex) -> Option<f64> {
        self.position(index).map(|p| self.coeffs[p])
    }

    /// `(I, S^I)` pairs in graded-lexicographic order, constant excluded.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        MultiIndex::graded(self.dimension, self.depth).zip(self.coeffs[1..].iter().copied())
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &TruncatedSignature) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Truncated tensor product: `(a ⊗ b)_n = Σ_{k=0..n} a_k ⊗ b_{n-k}`.
    pub fn tensor_product(&self, other: &TruncatedSignature) -> Result<TruncatedSignature> {
        if self.dimension != other.dimension || self.depth != other.depth {
            return Err(Error::IncompatibleSignatures(format!(
                "dimension/depth {}/{} vs {}/{}",
                self.dimension, self.depth, other.dimension, other.depth
            )));
        }
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// In-place `self = self ⊗ other`. Levels are rewritten from the top
    /// down so lower levels of `self` are still the old values when read.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &TruncatedSignature) {
        let d = self.dimension;
        for n in (1..=self.depth).rev() {
            let (lower, upper) = self.coeffs.split_at_mut(level_offset(d, n));
            let target = &mut upper[..d.pow(n as u32)];
            let b0 = other.coeffs[0];
            if b0 != 1.0 {
                target.iter_mut().for_each(|t| *t *= b0);
            }
            for k in 0..n {
                let a_k = &lower[level_offset(d, k)..level_offset(d, k) + d.pow(k as u32)];
                let b_len = d.pow((n - k) as u32);
                let b_start = level_offset(d, n - k);
                let b_m = &other.coeffs[b_start..b_start + b_len];
                for (i, &av) in a_k.iter().enumerate() {
                    if av == 0.0 {
                        continue;
                    }
                    let row = &mut target[i * b_len..(i + 1) * b_len];
                    for (t, &bv) in row.iter_mut().zip(b_m) {
                        *t += av * bv;
                    }
                }
            }
        }
        let a0 = self.coeffs[0];
        self.coeffs[0] = a0 * other.coeffs[0];
    }
}
