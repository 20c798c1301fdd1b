use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{fit_line, Scalar};

/// Window settings for detrended fluctuation analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DfaConfig {
    pub window_min: usize,
    /// Defaults to a quarter of the series length.
    pub window_max: Option<usize>,
    pub n_windows: usize,
}

impl Default for DfaConfig {
    fn default() -> Self {
        Self {
            window_min: 8,
            window_max: None,
            n_windows: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurstEstimate<T> {
    pub hurst: T,
    pub window_sizes: Vec<usize>,
    /// RMS detrended fluctuation for each window size.
    pub fluctuations: Vec<T>,
    pub fit_slope: T,
    pub fit_intercept: T,
    pub fit_stderr: T,
}

/// Up to `count` integer window sizes evenly spaced in log between `min`
/// and `max`, deduplicated after rounding.
pub fn log_spaced_windows(min: usize, max: usize, count: usize) -> Vec<usize> {
    if count <= 1 || min >= max {
        return vec![min];
    }
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    out.dedup();
    out
}

/// DFA-1 Hurst exponent of a sequence of increments.
pub fn dfa_hurst<T: Scalar>(
    increments: &[T],
    window_min: usize,
    window_max: usize,
    n_windows: usize,
) -> Result<HurstEstimate<T>> {
    dfa_hurst_with(
        increments,
        &DfaConfig {
            window_min,
            window_max: Some(window_max),
            n_windows,
        },
    )
}

pub fn dfa_hurst_with<T: Scalar>(increments: &[T], config: &DfaConfig) -> Result<HurstEstimate<T>> {
    let len = increments.len();
    let window_max = config.window_max.unwrap_or(len / 4);
    let invalid = || Error::WindowRangeInvalid {
        min: config.window_min,
        max: window_max,
        count: config.n_windows,
    };
    if config.window_min < 4 || window_max <= config.window_min || config.n_windows < 2 {
        return Err(invalid());
    }
    if len < 4 * window_max {
        return Err(Error::SeriesTooShort { len, window_max });
    }
    let window_sizes = log_spaced_windows(config.window_min, window_max, config.n_windows);
    if window_sizes.len() < 2 {
        return Err(invalid());
    }

    let mean = increments.iter().copied().sum::<T>() / T::of_usize(len);
    let mut profile = Vec::with_capacity(len);
    let mut acc = T::zero();
    for &x in increments {
        acc = acc + (x - mean);
        profile.push(acc);
    }

    let fluctuations: Vec<T> = window_sizes
        .iter()
        .map(|&n| detrended_rms(&profile, n))
        .collect();
    let log_n: Vec<T> = window_sizes.iter().map(|&n| T::of_usize(n).ln()).collect();
    let log_f: Vec<T> = fluctuations.iter().map(|f| f.ln()).collect();
    let fit = fit_line(&log_n, &log_f);
    Ok(HurstEstimate {
        hurst: fit.slope,
        window_sizes,
        fluctuations,
        fit_slope: fit.slope,
        fit_intercept: fit.intercept,
        fit_stderr: fit.slope_stderr,
    })
}

/// Root-mean-square residual of per-window linear fits over consecutive
/// non-overlapping windows of size `n`.
fn detrended_rms<T: Scalar>(profile: &[T], n: usize) -> T {
    let nf = T::of_usize(n);
    let x_mean = (nf - T::one()) * T::half();
    // sum of (x - x_mean)^2 for x = 0..n-1
    let sxx = nf * (nf * nf - T::one()) / T::of(12.0);
    let mut total = T::zero();
    let mut windows = 0usize;
    for w in profile.chunks_exact(n) {
        let y_mean = w.iter().copied().sum::<T>() / nf;
        let mut sxy = T::zero();
        let mut syy = T::zero();
        for (j, &y) in w.iter().enumerate() {
            let dx = T::of_usize(j) - x_mean;
            let dy = y - y_mean;
            sxy = sxy + dx * dy;
            syy = syy + dy * dy;
        }
        total = total + (syy - sxy * sxy / sxx).max(T::zero());
        windows += 1;
    }
    (total / T::of_usize(windows * n)).sqrt()
}
