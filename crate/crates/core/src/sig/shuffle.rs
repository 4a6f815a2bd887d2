use std::collections::BTreeMap;

use super::MultiIndex;

/// The shuffle product of two words as a multiset of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleExpansion {
    terms: Vec<(MultiIndex, u64)>,
}

impl ShuffleExpansion {
    /// `(word, multiplicity)` pairs in lexicographic word order.
    pub fn terms(&self) -> &[(MultiIndex, u64)] {
        &self.terms
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, word: &MultiIndex) -> u64 {
        self.terms
            .iter()
            .find(|(w, _)| w == word)
            .map_or(0, |(_, m)| *m)
    }
}

/// All order-preserving interleavings of `left` and `right`, counted with
/// multiplicity.
///
/// `S^I · S^J = Σ_K m_K S^K` holds for the signature of any path, where
/// `(K, m_K)` ranges over the returned terms.
pub fn shuffle(left: &MultiIndex, right: &MultiIndex) -> ShuffleExpansion {
    let mut counts = BTreeMap::new();
    let mut prefix = Vec::with_capacity(left.len() + right.len());
    interleave(left.letters(), right.letters(), &mut prefix, &mut counts);
    ShuffleExpansion {
        terms: counts
            .into_iter()
            .map(|(w, m)| (MultiIndex::new(w).expect("interleaving is non-empty"), m))
            .collect(),
    }
}

fn interleave(a: &[usize], b: &[usize], prefix: &mut Vec<usize>, out: &mut BTreeMap<Vec<usize>, u64>) {
    match (a.split_first(), b.split_first()) {
        (None, None) => *out.entry(prefix.clone()).or_insert(0) += 1,
        (Some((&x, rest)), None) | (None, Some((&x, rest))) => {
            prefix.push(x);
            interleave(rest, &[], prefix, out);
            prefix.pop();
        }
        (Some((&x, a_rest)), Some((&y, b_rest))) => {
            prefix.push(x);
            interleave(a_rest, b, prefix, out);
            prefix.pop();
            prefix.push(y);
            interleave(a, b_rest, prefix, out);
            prefix.pop();
        }
    }
}
