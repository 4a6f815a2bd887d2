//! SMOTE and ADASYN oversampling.
//!
//! A synthetic row is `x + λ (x_nn - x)` with `λ ~ U[0, 1)`, where `x` is a
//! minority row and `x_nn` one of its `k` nearest minority neighbours. SMOTE
//! spreads the generated rows evenly over the minority rows; ADASYN weights
//! each row by the share of majority points among its `k` nearest
//! neighbours in the full set.

use ndarray::{concatenate, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Smote,
    Adasyn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OversampleConfig {
    /// Neighbourhood size; reduced to `minority - 1` on small folds.
    pub k: usize,
    pub strategy: Strategy,
}

impl Default for OversampleConfig {
    fn default() -> Self {
        OversampleConfig {
            k: 5,
            strategy: Strategy::Adasyn,
        }
    }
}

fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` nearest rows of `pool` to row `of` of `pool`
/// (excluding itself); distance ties go to the lower index.
fn neighbours(pool: ArrayView2<'_, f64>, of: usize, k: usize) -> Vec<usize> {
    let x = pool.row(of);
    let mut cand: Vec<(f64, usize)> = (0..pool.nrows())
        .filter(|&j| j != of)
        .map(|j| (sq_dist(x, pool.row(j)), j))
        .collect();
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    cand.into_iter().take(k).map(|(_, j)| j).collect()
}

fn check(minority: ArrayView2<'_, f64>, k: usize) -> Result<()> {
    if minority.nrows() < 2 {
        return Err(Error::CannotOversample(format!(
            "minority class has {} row(s); at least 2 are needed",
            minority.nrows()
        )));
    }
    if k == 0 || k >= minority.nrows() {
        return Err(Error::invalid(format!(
            "k = {k} must be in 1..={}",
            minority.nrows() - 1
        )));
    }
    Ok(())
}

/// Generates `per_row[i]` synthetic rows from minority row `i`.
fn synthesize(
    minority: ArrayView2<'_, f64>,
    k: usize,
    per_row: &[usize],
    rng: &mut impl Rng,
    mut lambda: impl FnMut(&mut dyn rand::RngCore) -> f64,
) -> Array2<f64> {
    let total: usize = per_row.iter().sum();
    let mut out = Array2::zeros((total, minority.ncols()));
    let mut r = 0;
    for (i, &count) in per_row.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let nn = neighbours(minority, i, k);
        let x = minority.row(i);
        for _ in 0..count {
            let other = minority.row(nn[rng.random_range(0..nn.len())]);
            let l = lambda(rng);
            out.row_mut(r)
                .iter_mut()
                .zip(x.iter().zip(other))
                .for_each(|(o, (a, b))| *o = a + l * (b - a));
            r += 1;
        }
    }
    out
}

/// Even allocation: every row gets `total / m`, and a random subset of
/// `total % m` rows get one more.
fn even_allocation(m: usize, total: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut per_row = vec![total / m; m];
    for i in sample(rng, m, total % m) {
        per_row[i] += 1;
    }
    per_row
}

/// Allocation proportional to `weights`, rounded by largest remainder
/// (ties to the lower index) so the counts sum to `total` exactly.
fn proportional_allocation(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut per_row: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let short = total - per_row.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(short) {
        per_row[i] += 1;
    }
    per_row
}

/// SMOTE: returns `majority_count - minority.nrows()` synthetic rows (none
/// if the minority is not smaller).
pub fn smote(
    minority: ArrayView2<'_, f64>,
    majority_count: usize,
    k: usize,
    rng: &mut impl Rng,
) -> Result<Array2<f64>> {
    check(minority, k)?;
    let needed = majority_count.saturating_sub(minority.nrows());
    let per_row = even_allocation(minority.nrows(), needed, rng);
    Ok(synthesize(minority, k, &per_row, rng, |r| r.random::<f64>()))
}

/// ADASYN: like [`smote`], with generation counts proportional to the
/// fraction of majority rows among each minority row's `k` nearest
/// neighbours in the union of both classes. Falls back to even allocation
/// when no minority row has a majority neighbour.
pub fn adasyn(
    minority: ArrayView2<'_, f64>,
    majority: ArrayView2<'_, f64>,
    k: usize,
    rng: &mut impl Rng,
) -> Result<Array2<f64>> {
    check(minority, k)?;
    let m = minority.nrows();
    let needed = majority.nrows().saturating_sub(m);
    let full = concatenate(Axis(0), &[minority, majority])
        .map_err(|e| Error::invalid(format!("class matrices disagree in width: {e}")))?;
    let hardness: Vec<f64> = (0..m)
        .map(|i| {
            let nn = neighbours(full.view(), i, k);
            nn.iter().filter(|&&j| j >= m).count() as f64 / k as f64
        })
        .collect();
    let per_row = if hardness.iter().sum::<f64>() > 0.0 {
        proportional_allocation(&hardness, needed)
    } else {
        even_allocation(m, needed, rng)
    };
    Ok(synthesize(minority, k, &per_row, rng, |r| r.random::<f64>()))
}

/// Result of [`balance`]: original rows followed by synthetic minority rows.
#[derive(Debug, Clone)]
pub struct Balanced {
    pub x: Array2<f64>,
    pub y: Vec<u8>,
    pub n_synthetic: usize,
}

/// Oversamples the smaller class of `(x, y)` up to the size of the larger.
pub fn balance(
    x: ArrayView2<'_, f64>,
    y: &[u8],
    config: &OversampleConfig,
    rng: &mut impl Rng,
) -> Result<Balanced> {
    let ones: Vec<usize> = (0..y.len()).filter(|&i| y[i] == 1).collect();
    let zeros: Vec<usize> = (0..y.len()).filter(|&i| y[i] == 0).collect();
    let (minority_label, minority, majority) = if ones.len() < zeros.len() {
        (1u8, ones, zeros)
    } else if zeros.len() < ones.len() {
        (0u8, zeros, ones)
    } else {
        return Ok(Balanced {
            x: x.to_owned(),
            y: y.to_vec(),
            n_synthetic: 0,
        });
    };
    let min_x = x.select(Axis(0), &minority);
    let maj_x = x.select(Axis(0), &majority);
    let k = config.k.min(minority.len().saturating_sub(1)).max(1);
    let synthetic = match config.strategy {
        Strategy::Smote => smote(min_x.view(), majority.len(), k, rng)?,
        Strategy::Adasyn => adasyn(min_x.view(), maj_x.view(), k, rng)?,
    };
    let n_synthetic = synthetic.nrows();
    let x = concatenate(Axis(0), &[x, synthetic.view()]).expect("same width");
    let mut y = y.to_vec();
    y.extend(std::iter::repeat_n(minority_label, n_synthetic));
    Ok(Balanced { x, y, n_synthetic })
}
