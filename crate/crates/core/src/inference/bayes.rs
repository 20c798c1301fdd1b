use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Posterior mean and variance of a Bernoulli probability after `n`
/// successes in `total` trials under a uniform prior:
///
/// ```text
/// mean     = (n + 1) / (N + 2)
/// variance = (n + 1)(N - n + 1) / ((N + 3)(N + 2)^2)
/// ```
pub fn bayes_estimate<T: Scalar>(n: i64, total: i64) -> Result<(T, T)> {
    if n < 0 || total < 0 || n > total {
        return Err(Error::InvalidCounts { n, total });
    }
    let n1 = T::of_i64(n + 1);
    let t2 = T::of_i64(total + 2);
    let mean = n1 / t2;
    let variance = n1 * T::of_i64(total - n + 1) / (T::of_i64(total + 3) * t2 * t2);
    Ok((mean, variance))
}

/// Bounce statistics for one value of `b_prev`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BounceStats<T> {
    pub b_prev: u32,
    /// Bounces observed.
    pub n: u64,
    /// Trials observed.
    #[serde(rename = "N")]
    pub total: u64,
    pub mean: T,
    pub variance: T,
}

impl<T: Scalar> BounceStats<T> {
    pub fn from_counts(b_prev: u32, n: u64, total: u64) -> Result<Self> {
        let (mean, variance) = bayes_estimate(n as i64, total as i64)?;
        Ok(Self {
            b_prev,
            n,
            total,
            mean,
            variance,
        })
    }

    pub fn std_dev(&self) -> T {
        self.variance.sqrt()
    }

    /// Raw bounce frequency `n / N`, `None` without trials.
    pub fn frequency(&self) -> Option<T> {
        (self.total > 0).then(|| T::of_usize(self.n as usize) / T::of_usize(self.total as usize))
    }
}
