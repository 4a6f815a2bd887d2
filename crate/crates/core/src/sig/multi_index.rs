use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A word `(i_1, ..., i_k)` over the coordinate alphabet `1..=d`.
///
/// Letters are 1-based to match the usual `S^{(1,2)}` notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::invalid("multi-index must have at least one letter"));
        }
        if letters.contains(&0) {
            return Err(Error::invalid("multi-index letters are 1-based"));
        }
        Ok(MultiIndex(letters))
    }

    /// Checks every letter is at most `dimension`.
    pub fn check_dimension(&self, dimension: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l > dimension) {
            Some(l) => Err(Error::invalid(format!(
                "letter {l} of {self} exceeds dimension {dimension}"
            ))),
            None => Ok(()),
        }
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// All words of length `1..=depth` over `1..=dimension` in graded
    /// lexicographic order, the storage order of a truncated signature.
    pub fn graded(dimension: usize, depth: usize) -> impl Iterator<Item = MultiIndex> {
        (1..=depth).flat_map(move |k| words_of_length(dimension, k))
    }
}

fn words_of_length(dimension: usize, k: usize) -> impl Iterator<Item = MultiIndex> {
    let total = dimension.pow(k as u32);
    (0..total).map(move |mut flat| {
        let mut letters = vec![0; k];
        for slot in letters.iter_mut().rev() {
            *slot = flat % dimension + 1;
            flat /= dimension;
        }
        MultiIndex(letters)
    })
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, l) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::invalid(format!("`{s}` is not of the form (i,j,...)")))?;
        let letters = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad letter `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(letters)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
