use std::io::Write;

use crate::error::{Error, Result};
use crate::level_engine::{LevelKind, TrialRecord};
use crate::market_data::ResampledSeries;
use crate::scalar::Scalar;

/// Which consecutive trial pairs on a level produce a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// Every consecutive pair, including one ending at the final cross.
    #[default]
    Consecutive,
    /// Only pairs whose later trial is also a bounce.
    BouncePairs,
}

impl std::str::FromStr for Pairing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "consecutive" => Ok(Pairing::Consecutive),
            "bounce" | "bounce_pairs" => Ok(Pairing::BouncePairs),
            other => Err(format!("unknown pairing `{other}` (expected consecutive|bounce)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BounceFeature<T> {
    /// Samples from the stripe exit to the next entry.
    pub recurrence_time: usize,
    /// Largest distance from the level value in between, in ticks.
    pub max_excursion: T,
    pub symbol: String,
    pub day_id: String,
    pub scale: u32,
    pub level_value: T,
    pub kind: LevelKind,
}

/// Features of consecutive trials on the same level of `series`.
///
/// For a pair (earlier, later) the recurrence time is
/// `later.enter_index - earlier.exit_index`, and the excursion is taken
/// over samples `earlier.exit_index .. later.enter_index`. Supports and
/// resistances are pooled.
pub fn extract_features<T: Scalar>(
    series: &ResampledSeries<T>,
    trials: &[TrialRecord<T>],
    pairing: Pairing,
) -> Result<Vec<BounceFeature<T>>> {
    if trials
        .iter()
        .any(|t| t.exit_index >= series.len() || t.enter_index > t.exit_index)
    {
        return Err(Error::PathMismatch(series.len()));
    }
    let mut order: Vec<&TrialRecord<T>> = trials.iter().collect();
    order.sort_by_key(|t| (t.level_created_at, t.kind, t.enter_index));

    let mut features = Vec::new();
    for pair in order.windows(2) {
        let (earlier, later) = (pair[0], pair[1]);
        if earlier.level_key() != later.level_key() {
            continue;
        }
        if pairing == Pairing::BouncePairs && !later.is_bounce() {
            continue;
        }
        if later.enter_index <= earlier.exit_index {
            return Err(Error::PathMismatch(series.len()));
        }
        let level = earlier.level_value;
        let max_excursion = series.prices[earlier.exit_index..later.enter_index]
            .iter()
            .map(|&p| (p - level).abs())
            .fold(T::zero(), T::max);
        features.push(BounceFeature {
            recurrence_time: later.enter_index - earlier.exit_index,
            max_excursion,
            symbol: earlier.symbol.clone(),
            day_id: earlier.day_id.clone(),
            scale: earlier.scale,
            level_value: level,
            kind: earlier.kind,
        });
    }
    Ok(features)
}

pub const FEATURE_CSV_HEADER: [&str; 7] = [
    "symbol",
    "day",
    "scale",
    "kind",
    "level_value",
    "recurrence_time",
    "max_excursion",
];

pub fn write_features_csv<T: Scalar>(features: &[BounceFeature<T>], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FEATURE_CSV_HEADER)?;
    for f in features {
        w.write_record([
            f.symbol.as_str(),
            f.day_id.as_str(),
            &f.scale.to_string(),
            f.kind.as_str(),
            &f.level_value.to_string(),
            &f.recurrence_time.to_string(),
            &f.max_excursion.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
