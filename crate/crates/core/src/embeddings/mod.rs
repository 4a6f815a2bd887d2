//! From discrete streams to continuous paths.
//!
//! Standalone transforms work on plain slices; [`embed`] applies a
//! configured transform to a [`StreamRecord`], dropping or lifting missing
//! entries as the kind requires.

mod record;
mod transforms;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use record::StreamRecord;
pub use transforms::{
    axis_path, delay_axis_path, delay_axis_path_at, delay_path, delay_path_at, lead_lag,
    linear_path, missing_lift, time_lead_lag,
};

use crate::error::{Error, Result};
use crate::sig::Path;

/// Which transform turns a stream into a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    /// Stairstep `(t, x)` path.
    Axis,
    /// Straight segments between `(t, x)` points.
    Linear,
    /// 2-d lead-lag of the values (3-d with time augmentation).
    LeadLag,
    /// `(t, carried value, missing indicator)`.
    MissingLift,
    /// `(t^lead, d^lead, d^lag)` on integer time starting at 1.
    Delay,
    /// Stairstep version of [`EmbeddingKind::Delay`].
    DelayAxis,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 6] = [
        EmbeddingKind::Axis,
        EmbeddingKind::Linear,
        EmbeddingKind::LeadLag,
        EmbeddingKind::MissingLift,
        EmbeddingKind::Delay,
        EmbeddingKind::DelayAxis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmbeddingKind::Axis => "axis",
            EmbeddingKind::Linear => "linear",
            EmbeddingKind::LeadLag => "lead-lag",
            EmbeddingKind::MissingLift => "missing-lift",
            EmbeddingKind::Delay => "delay",
            EmbeddingKind::DelayAxis => "delay-axis",
        }
    }
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmbeddingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EmbeddingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = EmbeddingKind::ALL.iter().map(|k| k.name()).collect();
                Error::config(format!("unknown embedding `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub kind: EmbeddingKind,
    /// Adds a lead-clock time coordinate to `lead-lag`.
    pub time_augment: bool,
    /// Ignore supplied times and use positions.
    pub integer_time: bool,
}

impl EmbeddingConfig {
    /// The delay-stream embedding: lead-lag with an integer lead clock.
    pub fn delay() -> Self {
        EmbeddingConfig {
            kind: EmbeddingKind::Delay,
            time_augment: true,
            integer_time: true,
        }
    }

    pub fn of_kind(kind: EmbeddingKind) -> Self {
        match kind {
            EmbeddingKind::Delay | EmbeddingKind::DelayAxis => EmbeddingConfig {
                kind,
                ..Self::delay()
            },
            _ => EmbeddingConfig {
                kind,
                time_augment: false,
                integer_time: false,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(self.kind, EmbeddingKind::Delay | EmbeddingKind::DelayAxis)
            && !(self.time_augment && self.integer_time)
        {
            return Err(Error::config(
                "the delay embedding is always time-augmented with integer time",
            ));
        }
        Ok(())
    }

    /// Dimension of the produced paths.
    pub fn dimension(&self) -> usize {
        match self.kind {
            EmbeddingKind::Axis | EmbeddingKind::Linear => 2,
            EmbeddingKind::LeadLag if !self.time_augment => 2,
            _ => 3,
        }
    }
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self::delay()
    }
}

/// Embeds `record` as configured.
///
/// Every kind except the missing-data lift uses the observed entries only;
/// their time is the supplied time or the original position (1-based for
/// the delay kinds, 0-based otherwise), so gaps stay visible on the time
/// axis.
pub fn embed(record: &StreamRecord, config: &EmbeddingConfig) -> Result<Path> {
    config.validate()?;
    record.validate()?;
    if config.kind == EmbeddingKind::MissingLift {
        return transforms::missing_lift_with(record, config.integer_time);
    }
    if record.observed_count() < 2 {
        return Err(Error::Record {
            id: record.id.clone(),
            reason: format!("{} observed values; at least 2 are needed", record.observed_count()),
        });
    }
    let origin = match config.kind {
        EmbeddingKind::Delay | EmbeddingKind::DelayAxis => 1.0,
        _ => 0.0,
    };
    let (times, values): (Vec<f64>, Vec<f64>) = record
        .observed()
        .map(|(i, v)| (record.time_at(i, origin, config.integer_time), v))
        .unzip();
    let annotate = |e: Error| match e {
        Error::Record { .. } => e,
        other => Error::Record {
            id: record.id.clone(),
            reason: other.to_string(),
        },
    };
    let pairs = || times.iter().copied().zip(values.iter().copied()).collect::<Vec<_>>();
    match config.kind {
        EmbeddingKind::Axis => axis_path(&pairs()),
        EmbeddingKind::Linear => linear_path(&pairs()),
        EmbeddingKind::LeadLag if config.time_augment => time_lead_lag(&times, &values),
        EmbeddingKind::LeadLag => lead_lag(&values),
        EmbeddingKind::Delay => delay_path_at(&times, &values),
        EmbeddingKind::DelayAxis => delay_axis_path_at(&times, &values),
        EmbeddingKind::MissingLift => unreachable!(),
    }
    .map_err(annotate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in EmbeddingKind::ALL {
            assert_eq!(k.name().parse::<EmbeddingKind>().unwrap(), k);
        }
        assert!("lead_lag".parse::<EmbeddingKind>().is_err());
    }

    #[test]
    fn delay_requires_integer_time() {
        let bad = EmbeddingConfig {
            integer_time: false,
            ..EmbeddingConfig::delay()
        };
        assert!(bad.validate().is_err());
        assert!(EmbeddingConfig::delay().validate().is_ok());
    }

    #[test]
    fn dimensions() {
        let r = StreamRecord::complete("r", vec![1.0, 2.0, 0.5], None);
        for k in EmbeddingKind::ALL {
            let cfg = EmbeddingConfig::of_kind(k);
            assert_eq!(embed(&r, &cfg).unwrap().dimension(), cfg.dimension(), "{k}");
        }
        let cfg = EmbeddingConfig {
            time_augment: true,
            ..EmbeddingConfig::of_kind(EmbeddingKind::LeadLag)
        };
        assert_eq!(embed(&r, &cfg).unwrap().dimension(), 3);
    }

    #[test]
    fn delay_embedding_keeps_gap_in_time() {
        let r = StreamRecord::with_gaps("r", &[Some(4.0), None, Some(2.0)], None);
        let p = embed(&r, &EmbeddingConfig::delay()).unwrap();
        assert_eq!(p.to_points(), vec![vec![1.0, 4.0, 4.0], vec![3.0, 2.0, 4.0], vec![3.0, 2.0, 2.0]]);
    }

    #[test]
    fn too_few_observations_names_record() {
        let r = StreamRecord::with_gaps("subject-9", &[Some(4.0), None, None], None);
        let err = embed(&r, &EmbeddingConfig::delay()).unwrap_err();
        assert!(err.to_string().contains("subject-9"));
    }
}
