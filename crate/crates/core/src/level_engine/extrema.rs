use super::LevelKind;
use crate::error::{Error, Result};
use crate::market_data::ResampledSeries;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub index: usize,
    pub value: T,
    pub kind: LevelKind,
}

/// Interior local extrema of the path.
///
/// A run of equal prices counts as one point indexed at its first sample;
/// it is a resistance when both neighbouring runs are strictly lower and a
/// support when both are strictly higher. Runs touching either end of the
/// series are never extrema.
pub fn detect_extrema<T: Scalar>(series: &ResampledSeries<T>) -> Result<Vec<Extremum<T>>> {
    extrema_of(&series.prices)
}

pub(crate) fn extrema_of<T: Scalar>(prices: &[T]) -> Result<Vec<Extremum<T>>> {
    if prices.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: prices.len(),
        });
    }
    // (first index, value) of each run of equal prices
    let mut runs: Vec<(usize, T)> = Vec::new();
    for (i, &p) in prices.iter().enumerate() {
        if runs.last().map_or(true, |&(_, v)| v != p) {
            runs.push((i, p));
        }
    }
    Ok(runs
        .windows(3)
        .filter_map(|w| {
            let (prev, (index, value), next) = (w[0].1, w[1], w[2].1);
            let kind = if value > prev && value > next {
                LevelKind::Resistance
            } else if value < prev && value < next {
                LevelKind::Support
            } else {
                return None;
            };
            Some(Extremum { index, value, kind })
        })
        .collect())
}
