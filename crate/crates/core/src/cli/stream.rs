//! Single-stream input for `sig`.
//!
//! Either one line of comma-separated values (`1,3,2`), or one value per
//! line with an optional second `missing` column (`0`/`1`). An empty field
//! or `*` marks a missing value. Blank lines and lines starting with `#`
//! are skipped.

use crate::embeddings::StreamRecord;
use crate::error::{Error, Result};

fn value(field: &str, line: usize) -> Result<Option<f64>> {
    match field.trim() {
        "" | "*" => Ok(None),
        f => f
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Some)
            .ok_or_else(|| Error::Parse {
                line,
                reason: format!("`{f}` is not a finite number"),
            }),
    }
}

pub fn parse_stream(text: &str, id: &str) -> Result<StreamRecord> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let values: Vec<Option<f64>> = match lines.as_slice() {
        [] => return Err(Error::Parse { line: 1, reason: "no values".into() }),
        [(line, only)] => only.split(',').map(|f| value(f, *line)).collect::<Result<_>>()?,
        many => many
            .iter()
            .map(|&(line, l)| {
                let fields: Vec<&str> = l.split(',').collect();
                match fields.as_slice() {
                    [v] => value(v, line),
                    [v, m] => match m.trim() {
                        "0" => value(v, line)?.map(Some).ok_or_else(|| Error::Parse {
                            line,
                            reason: "observed entry without a value".into(),
                        }),
                        "1" => Ok(None),
                        other => Err(Error::Parse {
                            line,
                            reason: format!("missing flag must be 0 or 1, got `{other}`"),
                        }),
                    },
                    _ => Err(Error::Parse {
                        line,
                        reason: format!("expected `value` or `value,missing`, got {} fields", fields.len()),
                    }),
                }
            })
            .collect::<Result<_>>()?,
    };
    Ok(StreamRecord::with_gaps(id, &values, None))
}
