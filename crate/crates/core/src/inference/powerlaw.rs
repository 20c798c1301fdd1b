use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::Histogram;
use crate::scalar::{fit_line, Scalar};

/// Least-squares power law `density = amplitude * x^exponent` on log-log
/// histogram points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit<T> {
    pub exponent: T,
    pub amplitude: T,
    pub fit_range: (T, T),
    pub r_squared: T,
    pub bins_used: usize,
}

/// Fits over bins with positive density whose centre lies in `fit_range`
/// (inclusive); `None` uses every bin.
pub fn powerlaw_fit<T: Scalar>(
    histogram: &Histogram<T>,
    fit_range: Option<(T, T)>,
) -> Result<PowerLawFit<T>> {
    let centers = histogram.centers();
    let (lo, hi) = fit_range.unwrap_or_else(|| {
        (
            centers.first().copied().unwrap_or_else(T::zero),
            centers.last().copied().unwrap_or_else(T::zero),
        )
    });
    let (xs, ys): (Vec<T>, Vec<T>) = centers
        .iter()
        .zip(&histogram.density)
        .filter(|&(&c, &d)| d > T::zero() && c > T::zero() && c >= lo && c <= hi)
        .map(|(&c, &d)| (c.ln(), d.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::TooFewBins(xs.len()));
    }
    let fit = fit_line(&xs, &ys);
    Ok(PowerLawFit {
        exponent: fit.slope,
        amplitude: fit.intercept.exp(),
        fit_range: (lo, hi),
        r_squared: fit.r_squared,
        bins_used: xs.len(),
    })
}
