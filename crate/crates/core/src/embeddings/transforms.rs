use crate::error::{Error, Result};
use crate::sig::Path;

use super::StreamRecord;

fn check_times(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.len() < 2 {
        return Err(Error::invalid("need at least 2 (time, value) pairs"));
    }
    if let Some(i) = pairs.windows(2).position(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidTimes(format!(
            "time at position {} is not greater than its predecessor",
            i + 1
        )));
    }
    Ok(())
}

/// Stairstep embedding of `(t, x)` pairs: between consecutive pairs the
/// path first moves along time to `(t_{i+1}, x_i)`, then along the value
/// axis to `(t_{i+1}, x_{i+1})`. `n` pairs give `2n - 1` points.
pub fn axis_path(pairs: &[(f64, f64)]) -> Result<Path> {
    check_times(pairs)?;
    let mut coords = Vec::with_capacity(2 * (2 * pairs.len() - 1));
    coords.extend([pairs[0].0, pairs[0].1]);
    for w in pairs.windows(2) {
        let ((_, x0), (t1, x1)) = (w[0], w[1]);
        coords.extend([t1, x0, t1, x1]);
    }
    Path::from_flat(2, coords)
}

/// Piecewise-linear interpolation of `(t, x)` pairs.
pub fn linear_path(pairs: &[(f64, f64)]) -> Result<Path> {
    check_times(pairs)?;
    Path::from_flat(2, pairs.iter().flat_map(|&(t, x)| [t, x]).collect())
}

/// Lead-lag transform of `x_0..x_N`: `2N + 1` points in the plane with
/// point `2n = (x_n, x_n)` and point `2n + 1 = (x_{n+1}, x_n)`.
/// Coordinate 1 is the lead, coordinate 2 the lag.
pub fn lead_lag(values: &[f64]) -> Result<Path> {
    if values.len() < 2 {
        return Err(Error::invalid("lead-lag needs at least 2 values"));
    }
    let mut coords = Vec::with_capacity(2 * (2 * values.len() - 1));
    coords.extend([values[0], values[0]]);
    for w in values.windows(2) {
        coords.extend([w[1], w[0], w[1], w[1]]);
    }
    Path::from_flat(2, coords)
}

/// Lead-lag of `values` with a time coordinate that moves with the lead:
/// points `(t_n, x_n, x_n)` and `(t_{n+1}, x_{n+1}, x_n)`.
pub fn time_lead_lag(times: &[f64], values: &[f64]) -> Result<Path> {
    if times.len() != values.len() {
        return Err(Error::invalid("times and values differ in length"));
    }
    if values.len() < 2 {
        return Err(Error::invalid("lead-lag needs at least 2 values"));
    }
    let mut coords = Vec::with_capacity(3 * (2 * values.len() - 1));
    coords.extend([times[0], values[0], values[0]]);
    for i in 1..values.len() {
        coords.extend([times[i], values[i], values[i - 1]]);
        coords.extend([times[i], values[i], values[i]]);
    }
    Path::from_flat(3, coords)
}

fn check_delays(delays: &[f64]) -> Result<()> {
    if delays.len() < 2 {
        return Err(Error::invalid("a delay path needs at least 2 delays"));
    }
    if let Some(i) = delays.iter().position(|d| !(*d >= 0.0)) {
        return Err(Error::invalid(format!(
            "delay at position {i} is negative or not a number"
        )));
    }
    Ok(())
}

/// The 3-d delay path `(t^lead, d^lead, d^lag)` with integer time
/// `1..=N`.
pub fn delay_path(delays: &[f64]) -> Result<Path> {
    let times: Vec<f64> = (1..=delays.len()).map(|t| t as f64).collect();
    delay_path_at(&times, delays)
}

/// [`delay_path`] with explicit times (e.g. week numbers with gaps).
pub fn delay_path_at(times: &[f64], delays: &[f64]) -> Result<Path> {
    check_delays(delays)?;
    time_lead_lag(times, delays)
}

/// Stairstep variant of [`delay_path`]: every step moves one coordinate,
/// time first, then lead, then lag.
pub fn delay_axis_path(delays: &[f64]) -> Result<Path> {
    let times: Vec<f64> = (1..=delays.len()).map(|t| t as f64).collect();
    delay_axis_path_at(&times, delays)
}

/// [`delay_axis_path`] with explicit times.
pub fn delay_axis_path_at(times: &[f64], delays: &[f64]) -> Result<Path> {
    check_delays(delays)?;
    if times.len() != delays.len() {
        return Err(Error::invalid("times and values differ in length"));
    }
    let mut coords = Vec::with_capacity(3 * (3 * delays.len() - 2));
    coords.extend([times[0], delays[0], delays[0]]);
    for i in 1..delays.len() {
        let (t, d, prev) = (times[i], delays[i], delays[i - 1]);
        coords.extend([t, prev, prev]);
        coords.extend([t, d, prev]);
        coords.extend([t, d, d]);
    }
    Path::from_flat(3, coords)
}

/// Lifts a stream with gaps into `(t_j, y_j, r_j)`: `y_j` carries the last
/// observed value forward over gaps and `r_j` is 1 exactly at missing
/// positions. Time is the supplied time, or the position `0..N-1`.
pub fn missing_lift(record: &StreamRecord) -> Result<Path> {
    missing_lift_with(record, false)
}

pub(crate) fn missing_lift_with(record: &StreamRecord, integer_time: bool) -> Result<Path> {
    record.validate_leading()?;
    if record.len() < 2 {
        return Err(Error::Record {
            id: record.id.clone(),
            reason: "the missing-data lift needs at least 2 entries".into(),
        });
    }
    let mut coords = Vec::with_capacity(3 * record.len());
    let mut carried = record.values[0];
    for (i, (&v, &m)) in record.values.iter().zip(&record.missing).enumerate() {
        if !m {
            carried = v;
        }
        coords.extend([record.time_at(i, 0.0, integer_time), carried, f64::from(u8::from(m))]);
    }
    Path::from_flat(3, coords)
}
