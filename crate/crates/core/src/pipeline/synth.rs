//! Synthetic two-group delay streams.
//!
//! Weekly delays are negative binomial (a Gamma-Poisson mixture) with a
//! group-specific mean and a shared dispersion `r`, so the variance is
//! `m + m²/r`. The first week is always answered and no more than two
//! consecutive weeks are missed.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::embeddings::StreamRecord;
use crate::error::{Error, Result};
use crate::rng;

/// No stream that starts observed and never misses three weeks in a row
/// can have a missing share above this.
pub const MAX_MISSING_PROB: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n0: usize,
    pub n1: usize,
    pub weeks: usize,
    pub mean0: f64,
    pub mean1: f64,
    pub dispersion: f64,
    pub missing_prob: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n0: 18,
            n1: 11,
            weeks: 13,
            mean0: 1.0,
            mean1: 6.0,
            dispersion: 2.0,
            missing_prob: 0.1,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n0 == 0 || self.n1 == 0 {
            return Err(Error::config("both groups need at least one subject"));
        }
        if !(self.mean0 >= 0.0 && self.mean1 >= 0.0) || !self.mean0.is_finite() || !self.mean1.is_finite() {
            return Err(Error::config("delay means must be finite and non-negative"));
        }
        if !(self.dispersion > 0.0) || !self.dispersion.is_finite() {
            return Err(Error::config("dispersion must be positive"));
        }
        if !(0.0..1.0).contains(&self.missing_prob) {
            return Err(Error::config("missing_prob must lie in [0, 1)"));
        }
        if self.missing_prob > MAX_MISSING_PROB {
            return Err(Error::config(format!(
                "missing_prob {} cannot be met with at most two consecutive misses (limit 2/3)",
                self.missing_prob
            )));
        }
        // two observed values are needed for a path
        let min_weeks = if self.missing_prob > 0.0 { 4 } else { 2 };
        if self.weeks < min_weeks {
            return Err(Error::config(format!("weeks must be at least {min_weeks}")));
        }
        Ok(())
    }
}

fn delay(mean: f64, dispersion: f64, rng: &mut impl Rng) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let rate = Gamma::new(dispersion, mean / dispersion).expect("validated").sample(rng);
    if rate <= 0.0 {
        return 0.0;
    }
    Poisson::new(rate).expect("positive rate").sample(rng)
}

/// Group 0 subjects first (`subject-001`, ...), then group 1. Each subject
/// draws from its own stream, so records do not depend on group sizes.
pub fn synth_generate(config: &SynthConfig) -> Result<Vec<StreamRecord>> {
    config.validate()?;
    let groups = [(0u8, config.n0, config.mean0), (1u8, config.n1, config.mean1)];
    let width = (config.n0 + config.n1).to_string().len().max(3);
    let mut records = Vec::with_capacity(config.n0 + config.n1);
    for (label, n, mean) in groups {
        for i in 0..n {
            let mut r = rng::stream(config.seed, "synth-subject", &[u64::from(label), i as u64]);
            let mut values = Vec::with_capacity(config.weeks);
            let mut missing = Vec::with_capacity(config.weeks);
            let mut run = 0;
            for week in 0..config.weeks {
                let miss = week > 0 && run < 2 && r.random_bool(config.missing_prob);
                run = if miss { run + 1 } else { 0 };
                let d = delay(mean, config.dispersion, &mut r);
                missing.push(miss);
                values.push(if miss { 0.0 } else { d });
            }
            records.push(StreamRecord {
                id: format!("subject-{:0width$}", records.len() + 1),
                values,
                missing,
                times: None,
                label: Some(label),
            });
        }
    }
    Ok(records)
}
