use super::{ResampleMode, ResampledSeries, TickSeries};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Samples `series` once every `scale` events or seconds.
///
/// * `EventTicks`: sample `k` is the price of event `k * scale` (1-based),
///   for `k = 1..=N / scale`.
/// * `PhysicalSeconds`: sample `k` is the last traded price at or before
///   `k * scale` seconds, for `k = 1..=T / scale` with `T` the time of the
///   last trade. Before the first trade the first trade's price is used.
pub fn resample<T: Scalar>(
    series: &TickSeries,
    scale: u32,
    mode: ResampleMode,
) -> Result<ResampledSeries<T>> {
    if scale == 0 {
        return Err(Error::InvalidScale(scale));
    }
    let step = scale as usize;
    let prices: Vec<T> = match mode {
        ResampleMode::EventTicks => series
            .prices()
            .iter()
            .skip(step - 1)
            .step_by(step)
            .map(|&p| T::of_i64(p))
            .collect(),
        ResampleMode::PhysicalSeconds => {
            let count = (series.duration() / scale as f64).floor();
            let count = if count.is_finite() && count > 0.0 {
                count as usize
            } else {
                0
            };
            let ts = series.timestamps();
            let px = series.prices();
            let mut out = Vec::with_capacity(count);
            let mut cursor = 0usize;
            for k in 1..=count {
                let t = (k as u64 * scale as u64) as f64;
                while cursor + 1 < ts.len() && ts[cursor + 1] <= t {
                    cursor += 1;
                }
                out.push(T::of_i64(px[cursor]));
            }
            out
        }
    };
    if prices.len() < 2 {
        return Err(Error::ScaleTooLarge { scale });
    }
    Ok(ResampledSeries {
        scale,
        mode,
        prices,
        source: series.id.clone(),
    })
}
