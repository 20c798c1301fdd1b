//! Memory effects of prices at support and resistance levels.
//!
//! The crate resamples tick data onto a time scale, finds local extrema,
//! and classifies every later visit of the price to a level's stripe as a
//! bounce or a cross. Pooled trials give Bayesian estimates of the bounce
//! probability conditioned on the number of earlier bounces, tested for
//! independence with a chi-square statistic. Detrended fluctuation analysis
//! estimates the Hurst exponent, and the recurrence time and maximum
//! excursion between consecutive trials feed power-law histogram fits.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

pub mod error;
pub mod features;
pub mod inference;
pub mod level_engine;
pub mod market_data;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{LineFit, Scalar};

pub use level_engine::{LevelKind, Outcome};
pub use market_data::{ResampleMode, SeriesId, TickSeries};

pub type Series = market_data::ResampledSeries<f64>;
pub type Series32 = market_data::ResampledSeries<f32>;
pub type Level = level_engine::Level<f64>;
pub type Trial = level_engine::TrialRecord<f64>;
pub type Stats = inference::BounceStats<f64>;
pub type ChiSquare = inference::ChiSquareResult<f64>;
pub type Hurst = inference::HurstEstimate<f64>;
pub type PowerLaw = inference::PowerLawFit<f64>;
pub type Feature = features::BounceFeature<f64>;
pub type Hist = features::Histogram<f64>;
