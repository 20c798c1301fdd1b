use std::io::{Read, Write};

use super::{LevelKind, Outcome, TrialRecord};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const TRIAL_CSV_HEADER: [&str; 9] = [
    "symbol",
    "day",
    "scale",
    "kind",
    "level_value",
    "b_prev",
    "outcome",
    "enter_index",
    "exit_index",
];

pub fn write_trials_csv<T: Scalar>(trials: &[TrialRecord<T>], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_CSV_HEADER)?;
    for t in trials {
        w.write_record([
            t.symbol.as_str(),
            t.day_id.as_str(),
            &t.scale.to_string(),
            t.kind.as_str(),
            &t.level_value.to_string(),
            &t.b_prev.to_string(),
            t.outcome.as_str(),
            &t.enter_index.to_string(),
            &t.exit_index.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads trials written by [`write_trials_csv`]. The level creation index is
/// not part of the file and is set to `usize::MAX`.
pub fn read_trials_csv<T: Scalar>(input: impl Read) -> Result<Vec<TrialRecord<T>>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| Error::Parse {
            line: row + 1,
            message: format!("bad {what}"),
        };
        let field = |i: usize| rec.get(i).ok_or_else(|| bad(TRIAL_CSV_HEADER[i]));
        let outcome = match field(6)? {
            "bounce" => Outcome::Bounce,
            "cross" => Outcome::Cross,
            _ => return Err(bad("outcome")),
        };
        let level_value: f64 = field(4)?.parse().map_err(|_| bad("level_value"))?;
        out.push(TrialRecord {
            symbol: field(0)?.to_string(),
            day_id: field(1)?.to_string(),
            scale: field(2)?.parse().map_err(|_| bad("scale"))?,
            kind: field(3)?.parse::<LevelKind>().map_err(|_| bad("kind"))?,
            level_value: T::of(level_value),
            level_created_at: usize::MAX,
            b_prev: field(5)?.parse().map_err(|_| bad("b_prev"))?,
            outcome,
            enter_index: field(7)?.parse().map_err(|_| bad("enter_index"))?,
            exit_index: field(8)?.parse().map_err(|_| bad("exit_index"))?,
        });
    }
    Ok(out)
}
