use std::fs;
use std::io::Write;
use std::path::Path;

use super::{SeriesId, TickSeries};
use crate::error::{Error, Result};

/// Splits a `SYMBOL_YYYYMMDD` file stem into symbol and day.
///
/// The split happens at the last underscore so symbols may contain one.
/// A stem without an underscore is used as the symbol with an empty day.
pub fn split_stem(stem: &str) -> SeriesId {
    match stem.rsplit_once('_') {
        Some((symbol, day)) => SeriesId::new(symbol, day),
        None => SeriesId::new(stem, ""),
    }
}

/// Reads one symbol-day from a tick CSV file.
pub fn load_ticks(path: &Path) -> Result<TickSeries> {
    if !path.is_file() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_ticks_named(&text, split_stem(&stem))
}

pub fn parse_ticks(text: &str) -> Result<TickSeries> {
    parse_ticks_named(text, SeriesId::new("", ""))
}

/// Parses tick CSV text.
///
/// Positions in errors are 1-based data-row numbers: the header and comment
/// lines are not counted, and a header error is reported as row 0.
pub fn parse_ticks_named(text: &str, id: SeriesId) -> Result<TickSeries> {
    let mut timestamps = Vec::new();
    let mut prices = Vec::new();
    let mut seen_header = false;
    let mut line_no = 0;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if seen_header {
            line_no += 1;
        } else {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != ["timestamp", "price"] {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header `timestamp,price`, found `{line}`"),
                });
            }
            seen_header = true;
            continue;
        }
        let (ts, px) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected two comma-separated fields".into(),
        })?;
        let ts: f64 = ts.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad timestamp `{}`", ts.trim()),
        })?;
        if !ts.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: "timestamp is not finite".into(),
            });
        }
        let px: i64 = px.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad price `{}`", px.trim()),
        })?;
        if px <= 0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("price {px} is not a positive tick count"),
            });
        }
        if let Some(&prev) = timestamps.last() {
            if ts < prev {
                return Err(Error::NonMonotoneTimestamps(line_no));
            }
        }
        timestamps.push(ts);
        prices.push(px);
    }
    if prices.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    TickSeries::new(id, timestamps, prices)
}

/// Writes a series in the tick CSV format. Whole-second timestamps are
/// written without a fractional part.
pub fn write_ticks(series: &TickSeries, out: &mut impl Write) -> Result<()> {
    writeln!(out, "timestamp,price")?;
    for (&t, &p) in series.timestamps().iter().zip(series.prices()) {
        if t.fract() == 0.0 && t.abs() < 1e15 {
            writeln!(out, "{},{}", t as i64, p)?;
        } else {
            writeln!(out, "{t},{p}")?;
        }
    }
    Ok(())
}
