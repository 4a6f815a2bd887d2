use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One subject's raw stream.
///
/// `values[i]` is ignored when `missing[i]` is set. `times`, when present,
/// must be strictly increasing; otherwise positions serve as integer time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub id: String,
    pub values: Vec<f64>,
    pub missing: Vec<bool>,
    pub times: Option<Vec<f64>>,
    pub label: Option<u8>,
}

impl StreamRecord {
    /// A stream with no missing entries and no explicit times.
    pub fn complete(id: impl Into<String>, values: Vec<f64>, label: Option<u8>) -> Self {
        let missing = vec![false; values.len()];
        StreamRecord {
            id: id.into(),
            values,
            missing,
            times: None,
            label,
        }
    }

    /// A stream where `None` marks a missing entry.
    pub fn with_gaps(id: impl Into<String>, values: &[Option<f64>], label: Option<u8>) -> Self {
        StreamRecord {
            id: id.into(),
            values: values.iter().map(|v| v.unwrap_or(0.0)).collect(),
            missing: values.iter().map(Option::is_none).collect(),
            times: None,
            label,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::Record {
            id: self.id.clone(),
            reason: reason.into(),
        }
    }

    /// Checks shape, finiteness, times and labels. Does not require the
    /// first entry to be observed; see [`StreamRecord::validate_leading`].
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.missing.len() {
            return Err(self.fail(format!(
                "{} values but {} missing flags",
                self.values.len(),
                self.missing.len()
            )));
        }
        if let Some(i) = self
            .values
            .iter()
            .zip(&self.missing)
            .position(|(v, &m)| !m && !v.is_finite())
        {
            return Err(self.fail(format!("non-finite value at position {i}")));
        }
        if let Some(times) = &self.times {
            if times.len() != self.values.len() {
                return Err(self.fail(format!(
                    "{} times for {} values",
                    times.len(),
                    self.values.len()
                )));
            }
            if times.iter().any(|t| !t.is_finite()) {
                return Err(self.fail("non-finite time"));
            }
            if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
                return Err(Error::InvalidTimes(format!(
                    "record `{}`: time at position {} does not increase",
                    self.id,
                    i + 1
                )));
            }
        }
        if let Some(l) = self.label {
            if l > 1 {
                return Err(self.fail(format!("label {l} is not binary")));
            }
        }
        Ok(())
    }

    /// Validation plus the requirement that the stream starts observed.
    pub fn validate_leading(&self) -> Result<()> {
        self.validate()?;
        match self.missing.iter().position(|&m| !m) {
            None => Err(self.fail("every entry is missing")),
            Some(0) => Ok(()),
            Some(_) => Err(self.fail("leading entries are missing; there is no value to carry forward")),
        }
    }

    /// `(position, value)` of observed entries.
    pub fn observed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.missing)
            .enumerate()
            .filter(|(_, (_, &m))| !m)
            .map(|(i, (&v, _))| (i, v))
    }

    pub fn observed_count(&self) -> usize {
        self.missing.iter().filter(|&&m| !m).count()
    }

    /// Length of the longest run of missing entries.
    pub fn max_consecutive_missing(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for &m in &self.missing {
            run = if m { run + 1 } else { 0 };
            best = best.max(run);
        }
        best
    }

    /// Time of position `i`: the supplied time, or `i + origin`.
    pub(crate) fn time_at(&self, i: usize, origin: f64, integer_time: bool) -> f64 {
        match (&self.times, integer_time) {
            (Some(t), false) => t[i],
            _ => i as f64 + origin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_of_missing() {
        let r = StreamRecord::with_gaps("a", &[Some(1.0), None, None, Some(2.0), None], None);
        assert_eq!(r.max_consecutive_missing(), 2);
        assert_eq!(r.observed_count(), 2);
        assert_eq!(r.observed().collect::<Vec<_>>(), vec![(0, 1.0), (3, 2.0)]);
    }

    #[test]
    fn validation_errors() {
        let mut r = StreamRecord::complete("a", vec![1.0, 2.0], Some(1));
        assert!(r.validate().is_ok());
        r.times = Some(vec![1.0, 1.0]);
        assert!(matches!(r.validate(), Err(Error::InvalidTimes(_))));
        r.times = None;
        r.label = Some(2);
        assert!(r.validate().is_err());
        let lead = StreamRecord::with_gaps("b", &[None, Some(1.0)], None);
        assert!(lead.validate().is_ok());
        assert!(lead.validate_leading().is_err());
        let none = StreamRecord::with_gaps("c", &[None, None], None);
        assert!(none.validate_leading().is_err());
        let ragged = StreamRecord {
            missing: vec![false],
            ..StreamRecord::complete("d", vec![1.0, 2.0], None)
        };
        assert!(ragged.validate().is_err());
    }

    #[test]
    fn missing_values_may_be_nan() {
        let r = StreamRecord {
            values: vec![1.0, f64::NAN],
            missing: vec![false, true],
            ..StreamRecord::complete("e", vec![], None)
        };
        assert!(r.validate().is_ok());
    }
}
