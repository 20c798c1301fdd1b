//! Tick ingestion, resampling onto a fixed time scale, and the surrogate
//! series used as null models and positive controls.

mod fbm;
mod resample;
mod surrogate;
mod ticks;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use fbm::{gen_fractional_walk, FgnGenerator, FgnMethod};
pub use resample::resample;
pub use surrogate::{
    day_rng, gen_sticky_level, gen_surrogate, shuffle_returns, shuffle_tick_returns, StickyParams,
    SurrogateKind, SurrogateSpec, TickLayout,
};
pub use ticks::{load_ticks, parse_ticks, parse_ticks_named, split_stem, write_ticks};

/// Symbol and trading day a series belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeriesId {
    pub symbol: String,
    pub day: String,
}

impl SeriesId {
    pub fn new(symbol: impl Into<String>, day: impl Into<String>) -> Self {
        Self {
            symbol: symbol.into(),
            day: day.into(),
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.symbol, self.day)
    }
}

/// Tick-by-tick record of one symbol-day.
///
/// Timestamps are seconds since the session open; prices are integer ticks.
#[derive(Debug, Clone, PartialEq)]
pub struct TickSeries {
    pub id: SeriesId,
    timestamps: Vec<f64>,
    prices: Vec<i64>,
}

impl TickSeries {
    pub fn new(id: SeriesId, timestamps: Vec<f64>, prices: Vec<i64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "{} timestamps but {} prices",
                    timestamps.len(),
                    prices.len()
                ),
            });
        }
        if timestamps.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: timestamps.len(),
            });
        }
        if let Some(i) = timestamps.windows(2).position(|w| !(w[1] >= w[0])) {
            return Err(Error::NonMonotoneTimestamps(i + 2));
        }
        if let Some(i) = prices.iter().position(|&p| p <= 0) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("price {} is not a positive tick count", prices[i]),
            });
        }
        Ok(Self {
            id,
            timestamps,
            prices,
        })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[i64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Seconds from the session open to the last trade.
    pub fn duration(&self) -> f64 {
        *self.timestamps.last().expect("validated non-empty")
    }
}

/// Whether the resampling scale counts trades or wall-clock seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResampleMode {
    #[serde(rename = "ticks")]
    EventTicks,
    #[default]
    #[serde(rename = "seconds")]
    PhysicalSeconds,
}

impl fmt::Display for ResampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResampleMode::EventTicks => "ticks",
            ResampleMode::PhysicalSeconds => "seconds",
        })
    }
}

impl std::str::FromStr for ResampleMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "ticks" => Ok(ResampleMode::EventTicks),
            "seconds" => Ok(ResampleMode::PhysicalSeconds),
            other => Err(format!("unknown resample mode `{other}` (expected seconds|ticks)")),
        }
    }
}

/// Price path observed once per `scale` units; the input of all level logic.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampledSeries<T> {
    pub scale: u32,
    pub mode: ResampleMode,
    pub prices: Vec<T>,
    pub source: SeriesId,
}

impl<T: Scalar> ResampledSeries<T> {
    /// Wraps an in-memory path sampled at event scale 1.
    pub fn from_prices(source: SeriesId, prices: Vec<T>) -> Self {
        Self {
            scale: 1,
            mode: ResampleMode::EventTicks,
            prices,
            source,
        }
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// First differences `P(k+1) - P(k)`.
    pub fn increments(&self) -> Vec<T> {
        self.prices.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn with_prices(&self, prices: Vec<T>) -> Self {
        Self {
            scale: self.scale,
            mode: self.mode,
            prices,
            source: self.source.clone(),
        }
    }
}
