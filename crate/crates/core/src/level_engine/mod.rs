//! Support/resistance detection and bounce/cross classification.
//!
//! Every interior local extremum of a resampled path becomes a level with a
//! stripe of width `delta` centred on it. After the price has left the
//! stripe once, each later entry opens a trial that resolves as a bounce
//! (exit on the entry side) or a cross (exit on the far side, which also
//! breaks the level). Overlapping stripes are tracked independently and
//! levels never outlive the series they were found on.

mod classify;
mod extrema;
mod records;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::{resample, ResampleMode, ResampledSeries, TickSeries};
use crate::scalar::Scalar;

pub use classify::{
    classify_events, classify_levels, classify_with, Classification, ClosedTrial, JumpPolicy,
    LevelTracker, OpenTrial,
};
pub use extrema::{detect_extrema, Extremum};
pub use records::{read_trials_csv, write_trials_csv, TRIAL_CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelKind {
    Support,
    Resistance,
}

impl LevelKind {
    pub const ALL: [LevelKind; 2] = [LevelKind::Resistance, LevelKind::Support];

    pub fn as_str(self) -> &'static str {
        match self {
            LevelKind::Support => "support",
            LevelKind::Resistance => "resistance",
        }
    }
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LevelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "support" => Ok(LevelKind::Support),
            "resistance" => Ok(LevelKind::Resistance),
            other => Err(format!("unknown level kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelState {
    Active,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Bounce,
    Cross,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Bounce => "bounce",
            Outcome::Cross => "cross",
        }
    }
}

/// Position of a price relative to a stripe. Edges belong to the stripe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripeSide {
    Below,
    Inside,
    Above,
}

/// A support or resistance level and its bounce history.
#[derive(Debug, Clone, PartialEq)]
pub struct Level<T> {
    pub value: T,
    pub kind: LevelKind,
    pub half_width: T,
    /// Index of the extremum (first sample of a plateau).
    pub created_at: usize,
    pub bounces: u32,
    pub state: LevelState,
}

impl<T: Scalar> Level<T> {
    pub fn new(value: T, kind: LevelKind, half_width: T, created_at: usize) -> Self {
        Self {
            value,
            kind,
            half_width,
            created_at,
            bounces: 0,
            state: LevelState::Active,
        }
    }

    pub fn side_of(&self, price: T) -> StripeSide {
        if price < self.value - self.half_width {
            StripeSide::Below
        } else if price > self.value + self.half_width {
            StripeSide::Above
        } else {
            StripeSide::Inside
        }
    }
}

/// One stripe entry and how it resolved.
///
/// For an ordinary trial `enter_index` is the first sample inside the stripe
/// and `exit_index` the first sample outside it afterwards. Under
/// [`JumpPolicy::CountAsCross`] a jump over the whole stripe between two
/// samples is recorded as a cross with `enter_index == exit_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord<T> {
    pub symbol: String,
    pub day_id: String,
    pub scale: u32,
    pub kind: LevelKind,
    pub level_value: T,
    /// Creation index of the level; identifies the level within its series.
    pub level_created_at: usize,
    pub b_prev: u32,
    pub outcome: Outcome,
    pub enter_index: usize,
    pub exit_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitSide {
    EntrySide,
    FarSide,
}

/// A trial viewed by the side of the stripe the price left through.
#[derive(Debug, Clone, Copy)]
pub struct BounceEvent<'a, T> {
    pub trial: &'a TrialRecord<T>,
    pub exit_side: ExitSide,
}

impl<T> TrialRecord<T> {
    pub fn event(&self) -> BounceEvent<'_, T> {
        BounceEvent {
            trial: self,
            exit_side: match self.outcome {
                Outcome::Bounce => ExitSide::EntrySide,
                Outcome::Cross => ExitSide::FarSide,
            },
        }
    }

    pub fn is_bounce(&self) -> bool {
        self.outcome == Outcome::Bounce
    }

    /// Key that separates levels of one series.
    pub fn level_key(&self) -> (LevelKind, usize) {
        (self.kind, self.level_created_at)
    }
}

/// Mean absolute increment of the series, in ticks.
pub fn stripe_width<T: Scalar>(series: &ResampledSeries<T>) -> Result<T> {
    mean_abs_increment(&series.prices)
}

pub(crate) fn mean_abs_increment<T: Scalar>(prices: &[T]) -> Result<T> {
    if prices.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    let total: T = prices.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(total / T::of_usize(prices.len() - 1))
}

/// Parameters of one per-day run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayParams {
    pub scale: u32,
    pub mode: ResampleMode,
    /// Stripe width is `stripe_multiplier * stripe_width(series)`.
    pub stripe_multiplier: f64,
    pub jump: JumpPolicy,
}

impl DayParams {
    pub fn new(scale: u32, mode: ResampleMode) -> Self {
        Self {
            scale,
            mode,
            stripe_multiplier: 1.0,
            jump: JumpPolicy::default(),
        }
    }
}

/// Everything computed for one symbol-day at one scale.
#[derive(Debug, Clone)]
pub struct DayAnalysis<T> {
    pub series: ResampledSeries<T>,
    pub delta: T,
    pub trials: Vec<TrialRecord<T>>,
}

/// Resamples one day and classifies every stripe entry on it.
pub fn run_day<T: Scalar>(
    ticks: &TickSeries,
    scale: u32,
    mode: ResampleMode,
) -> Result<Vec<TrialRecord<T>>> {
    Ok(analyze_day(ticks, &DayParams::new(scale, mode))?.trials)
}

pub fn analyze_day<T: Scalar>(ticks: &TickSeries, params: &DayParams) -> Result<DayAnalysis<T>> {
    let series = resample::<T>(ticks, params.scale, params.mode)?;
    analyze_series(series, params.stripe_multiplier, params.jump)
}

/// Classifies an already resampled series.
pub fn analyze_series<T: Scalar>(
    series: ResampledSeries<T>,
    stripe_multiplier: f64,
    jump: JumpPolicy,
) -> Result<DayAnalysis<T>> {
    let delta = stripe_width(&series)? * T::of(stripe_multiplier);
    let trials = classify_with(&series, delta, jump)?.trials;
    Ok(DayAnalysis {
        series,
        delta,
        trials,
    })
}
