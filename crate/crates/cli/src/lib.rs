//! Batch pipeline behind the `bounce-lab` command.
//!
//! Each command reads a [`RunConfig`], processes every symbol-day on a
//! worker pool and writes its outputs atomically into `output_dir`.

pub mod analyze;
pub mod config;
pub mod days;
pub mod features;
pub mod hurst;
mod output;
pub mod surrogate;

pub use analyze::{analyze, cmd_analyze, AnalyzeReport, AnalyzeRun, KindReport};
pub use config::{FitRange, GeneratedDays, Generator, Input, RunConfig, THREADS_ENV};
pub use features::{cmd_features, features, FeaturesReport, FeaturesRun};
pub use hurst::{cmd_hurst, hurst, HurstReport};
pub use surrogate::cmd_surrogate;
