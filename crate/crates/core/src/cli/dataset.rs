//! Dataset CSV: one row per subject-week.
//!
//! ```text
//! subject,week,delay,missing,label
//! subject-01,1,2,0,1
//! subject-01,2,,1,1
//! ```
//!
//! Weeks run `1..=n` for every subject. A missing week has an empty delay
//! and `missing=1`. The label is `0`, `1`, or empty when unknown, and must
//! agree across a subject's rows. Subjects keep their first-appearance
//! order.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::embeddings::StreamRecord;
use crate::error::{Error, Result};

pub const HEADER: [&str; 5] = ["subject", "week", "delay", "missing", "label"];

fn parse_err(line: u64, reason: impl Into<String>) -> Error {
    Error::Parse {
        line: line as usize,
        reason: reason.into(),
    }
}

pub fn read_dataset(input: impl Read) -> Result<Vec<StreamRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.iter().ne(HEADER) {
        return Err(parse_err(1, format!("header must be `{}`", HEADER.join(","))));
    }
    let mut records: Vec<StreamRecord> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let subject = &row[0];
        if subject.is_empty() {
            return Err(parse_err(line, "empty subject id"));
        }
        let week: usize = row[1]
            .parse()
            .map_err(|_| parse_err(line, format!("week `{}` is not a positive integer", &row[1])))?;
        let missing = match &row[3] {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(line, format!("missing must be 0 or 1, got `{other}`"))),
        };
        let delay = match (&row[2], missing) {
            ("", true) => 0.0,
            ("", false) => return Err(parse_err(line, "empty delay on an observed week")),
            (_, true) => return Err(parse_err(line, "missing week must have an empty delay")),
            (d, false) => d
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("delay `{d}` is not a finite number")))?,
        };
        let label = match &row[4] {
            "" => None,
            "0" => Some(0),
            "1" => Some(1),
            other => return Err(parse_err(line, format!("label must be 0, 1 or empty, got `{other}`"))),
        };
        let slot = *index.entry(subject.to_string()).or_insert_with(|| {
            records.push(StreamRecord {
                id: subject.to_string(),
                values: Vec::new(),
                missing: Vec::new(),
                times: None,
                label,
            });
            records.len() - 1
        });
        let rec = &mut records[slot];
        if week != rec.values.len() + 1 {
            return Err(parse_err(
                line,
                format!("{subject}: expected week {}, got {week}", rec.values.len() + 1),
            ));
        }
        if rec.label != label {
            return Err(parse_err(line, format!("{subject}: label differs from earlier rows")));
        }
        rec.values.push(delay);
        rec.missing.push(missing);
    }
    Ok(records)
}

/// Writes `records`; weeks are positions and explicit times are not kept.
pub fn write_dataset(output: impl Write, records: &[StreamRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    for r in records {
        r.validate()?;
        let label = r.label.map(|l| l.to_string()).unwrap_or_default();
        for (i, (v, m)) in r.values.iter().zip(&r.missing).enumerate() {
            let delay = if *m { String::new() } else { v.to_string() };
            let week = (i + 1).to_string();
            w.write_record([r.id.as_str(), &week, &delay, if *m { "1" } else { "0" }, &label])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}
