use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("parse error at row {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("timestamps decrease at row {0}")]
    NonMonotoneTimestamps(usize),
    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("scale {scale} leaves fewer than 2 samples")]
    ScaleTooLarge { scale: u32 },
    #[error("invalid stripe width {0}")]
    InvalidDelta(f64),
    #[error("invalid scale {0}: must be at least 1")]
    InvalidScale(u32),
    #[error("hurst exponent {0} outside (0, 1)")]
    InvalidHurst(f64),
    #[error("bounce bias {0} outside (0.5, 1]")]
    InvalidBias(f64),
    #[error("invalid surrogate parameter: {0}")]
    InvalidSurrogate(String),
    #[error("invalid counts: n = {n}, N = {total}")]
    InvalidCounts { n: i64, total: i64 },
    #[error("class with b_prev = {0} has zero variance")]
    DegenerateVariance(u32),
    #[error("chi-square test needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("invalid degrees of freedom {0}")]
    InvalidDof(u32),
    #[error("invalid chi-square statistic {0}")]
    InvalidStatistic(f64),
    #[error("series of length {len} too short for window_max {window_max}")]
    SeriesTooShort { len: usize, window_max: usize },
    #[error("invalid DFA window range [{min}, {max}] with {count} windows")]
    WindowRangeInvalid { min: usize, max: usize, count: usize },
    #[error("power-law fit needs at least 3 positive bins, got {0}")]
    TooFewBins(usize),
    #[error("trial indices exceed series length {0}")]
    PathMismatch(usize),
    #[error("no samples to bin")]
    EmptySamples,
    #[error("invalid histogram input: {0}")]
    InvalidHistogram(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
