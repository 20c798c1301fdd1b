use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

use super::BounceStats;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How the common bounce probability `c` of the null hypothesis is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterEstimate {
    /// Class means weighted by inverse posterior variance.
    InverseVariance,
    /// Unweighted average of the class means.
    PlainMean,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareConfig {
    pub alpha: f64,
    pub dof: u32,
    pub center: CenterEstimate,
}

impl Default for ChiSquareConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            dof: 2,
            center: CenterEstimate::InverseVariance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    IndependenceAccepted,
    IndependenceRejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult<T> {
    /// `sum (mean_b - c)^2 / sum variance_b`.
    pub statistic: T,
    pub dof: u32,
    pub p_value: T,
    pub c_hat: T,
    pub decision: Decision,
    pub alpha: T,
    /// Conventional `sum (mean_b - c)^2 / variance_b`, for comparison only.
    pub per_term_statistic: T,
}

/// Tests `p(b | b_prev) = c` across the classes in `stats`.
pub fn chi2_independence<T: Scalar>(
    stats: &[BounceStats<T>],
    alpha: f64,
) -> Result<ChiSquareResult<T>> {
    chi2_independence_with(
        stats,
        &ChiSquareConfig {
            alpha,
            ..ChiSquareConfig::default()
        },
    )
}

pub fn chi2_independence_with<T: Scalar>(
    stats: &[BounceStats<T>],
    config: &ChiSquareConfig,
) -> Result<ChiSquareResult<T>> {
    if stats.len() < 2 {
        return Err(Error::TooFewClasses(stats.len()));
    }
    if let Some(s) = stats.iter().find(|s| !(s.variance > T::zero())) {
        return Err(Error::DegenerateVariance(s.b_prev));
    }
    let c_hat = match config.center {
        CenterEstimate::InverseVariance => {
            let w: T = stats.iter().map(|s| s.variance.recip()).sum();
            stats.iter().map(|s| s.mean / s.variance).sum::<T>() / w
        }
        CenterEstimate::PlainMean => {
            stats.iter().map(|s| s.mean).sum::<T>() / T::of_usize(stats.len())
        }
        CenterEstimate::Fixed(c) => T::of(c),
    };
    let squares: T = stats.iter().map(|s| (s.mean - c_hat).powi(2)).sum();
    let variances: T = stats.iter().map(|s| s.variance).sum();
    let statistic = squares / variances;
    let per_term_statistic = stats
        .iter()
        .map(|s| (s.mean - c_hat).powi(2) / s.variance)
        .sum();
    let p_value = chi2_pvalue(statistic.as_f64(), config.dof)?;
    let decision = if p_value < config.alpha {
        Decision::IndependenceRejected
    } else {
        Decision::IndependenceAccepted
    };
    Ok(ChiSquareResult {
        statistic,
        dof: config.dof,
        p_value: T::of(p_value),
        c_hat,
        decision,
        alpha: T::of(config.alpha),
        per_term_statistic,
    })
}

/// Upper-tail probability of the chi-square distribution.
///
/// Even degrees of freedom use the finite Poisson sum
/// `exp(-x/2) * sum_{j < dof/2} (x/2)^j / j!`, which is `exp(-x/2)` for
/// two degrees of freedom.
pub fn chi2_pvalue(statistic: f64, dof: u32) -> Result<f64> {
    if dof == 0 {
        return Err(Error::InvalidDof(dof));
    }
    if !(statistic >= 0.0) {
        return Err(Error::InvalidStatistic(statistic));
    }
    if statistic.is_infinite() {
        return Ok(0.0);
    }
    if dof % 2 == 0 {
        let half = statistic / 2.0;
        if dof == 2 {
            return Ok((-half).exp());
        }
        let log_half = half.ln();
        let sum: f64 = (0..dof / 2)
            .map(|j| {
                let j = f64::from(j);
                let log_term = if j == 0.0 { 0.0 } else { j * log_half };
                (log_term - half - ln_gamma(j + 1.0)).exp()
            })
            .sum();
        Ok(sum.min(1.0))
    } else {
        let dist = ChiSquared::new(f64::from(dof)).map_err(|_| Error::InvalidDof(dof))?;
        Ok(dist.sf(statistic))
    }
}
