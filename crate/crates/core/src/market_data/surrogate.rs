use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gen_fractional_walk, ResampledSeries, SeriesId, TickSeries};
use crate::error::{Error, Result};
use crate::level_engine::{LevelTracker, StripeSide};
use crate::scalar::Scalar;

/// Generator state for stream `stream` of root seed `root`.
///
/// Streams of one root are independent ChaCha sequences, so per-day
/// generators can be created in any order or in parallel.
pub fn day_rng(root: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StickyParams {
    /// Step size of the walk in ticks; also the stripe width of its levels.
    pub level_spacing: u32,
    /// Probability of stepping back to the entry side from inside the
    /// stripe of a level with at least `trust_ramp` earlier bounces.
    pub bounce_bias: f64,
    /// Bounces needed to reach the full bias. A level with `r` bounces
    /// reflects with probability `0.5 + (bounce_bias - 0.5) * min(r, ramp) / ramp`.
    pub trust_ramp: u32,
}

impl StickyParams {
    pub fn new(level_spacing: u32, bounce_bias: f64) -> Self {
        Self {
            level_spacing,
            bounce_bias,
            trust_ramp: 4,
        }
    }

    /// Reflection probability for a level with `bounces` earlier bounces.
    pub fn reflect_probability(&self, bounces: u32) -> f64 {
        let ramp = self.trust_ramp.max(1);
        let trust = f64::from(bounces.min(ramp)) / f64::from(ramp);
        0.5 + (self.bounce_bias - 0.5) * trust
    }

    fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.bounce_bias) {
            return Err(Error::InvalidBias(self.bounce_bias));
        }
        if self.level_spacing == 0 {
            return Err(Error::InvalidSurrogate("level_spacing must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurrogateKind {
    /// Permuted increments of an existing series.
    ShuffledReturns,
    /// Cumulative fractional Gaussian noise.
    FractionalWalk { hurst: f64 },
    /// Random walk that tends to bounce on levels it has already bounced on.
    StickyLevel(StickyParams),
}

impl SurrogateKind {
    pub fn name(&self) -> &'static str {
        match self {
            SurrogateKind::ShuffledReturns => "shuffled",
            SurrogateKind::FractionalWalk { .. } => "fbm",
            SurrogateKind::StickyLevel(_) => "sticky",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateSpec {
    pub kind: SurrogateKind,
    pub seed: u64,
    pub length: usize,
}

impl SurrogateSpec {
    pub fn new(kind: SurrogateKind, seed: u64, length: usize) -> Self {
        Self { kind, seed, length }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Materialises a generated path as a tick record laid out by `layout`.
    pub fn to_ticks(&self, id: SeriesId, layout: &TickLayout) -> Result<TickSeries> {
        let path: ResampledSeries<f64> = gen_surrogate(self)?;
        layout.apply(&path.prices, id)
    }
}

/// How a generated path becomes a trade record.
///
/// Step `k` is a trade at `k * seconds_per_step` seconds. Path values are
/// multiplied by `ticks_per_unit`, rounded to whole ticks and offset so the
/// day opens at `base_price`, or higher if needed to keep every price
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickLayout {
    pub seconds_per_step: f64,
    pub ticks_per_unit: f64,
    pub base_price: i64,
}

impl Default for TickLayout {
    fn default() -> Self {
        Self {
            seconds_per_step: 1.0,
            ticks_per_unit: 1.0,
            base_price: 10_000,
        }
    }
}

impl TickLayout {
    pub fn apply(&self, path: &[f64], id: SeriesId) -> Result<TickSeries> {
        if !(self.seconds_per_step > 0.0 && self.seconds_per_step.is_finite()) {
            return Err(Error::InvalidSurrogate(format!(
                "seconds_per_step must be positive, got {}",
                self.seconds_per_step
            )));
        }
        if !(self.ticks_per_unit > 0.0 && self.ticks_per_unit.is_finite()) {
            return Err(Error::InvalidSurrogate(format!(
                "ticks_per_unit must be positive, got {}",
                self.ticks_per_unit
            )));
        }
        let scaled: Vec<f64> = path.iter().map(|p| p * self.ticks_per_unit).collect();
        path_to_ticks(&scaled, id, self.seconds_per_step, self.base_price)
    }
}

fn path_to_ticks(
    path: &[f64],
    id: SeriesId,
    seconds_per_step: f64,
    base_price: i64,
) -> Result<TickSeries> {
    let rounded: Vec<i64> = path.iter().map(|p| p.round() as i64).collect();
    let start = rounded.first().copied().unwrap_or(0);
    let low = rounded.iter().copied().min().unwrap_or(0) - start;
    let offset = base_price.max(1 - low) - start;
    let prices = rounded.iter().map(|p| p + offset).collect();
    let timestamps = (0..path.len()).map(|k| k as f64 * seconds_per_step).collect();
    TickSeries::new(id, timestamps, prices)
}

/// Generates a FractionalWalk or StickyLevel path.
pub fn gen_surrogate<T: Scalar>(spec: &SurrogateSpec) -> Result<ResampledSeries<T>> {
    match spec.kind {
        SurrogateKind::FractionalWalk { .. } => gen_fractional_walk(spec),
        SurrogateKind::StickyLevel(_) => gen_sticky_level(spec),
        SurrogateKind::ShuffledReturns => Err(Error::InvalidSurrogate(
            "shuffled returns need a source series".into(),
        )),
    }
}

/// Keeps the first price and rebuilds the path from a Fisher-Yates
/// permutation of the increments.
pub fn shuffle_returns<T: Scalar>(series: &ResampledSeries<T>, seed: u64) -> Result<ResampledSeries<T>> {
    if series.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: series.len(),
        });
    }
    let mut increments = series.increments();
    increments.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut prices = Vec::with_capacity(series.len());
    let mut level = series.prices[0];
    prices.push(level);
    for d in increments {
        level = level + d;
        prices.push(level);
    }
    Ok(series.with_prices(prices))
}

/// Same as [`shuffle_returns`] on the raw trades of a day; timestamps are
/// kept in place.
pub fn shuffle_tick_returns(series: &TickSeries, seed: u64) -> Result<TickSeries> {
    if series.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: series.len(),
        });
    }
    let px = series.prices();
    let mut increments: Vec<i64> = px.windows(2).map(|w| w[1] - w[0]).collect();
    increments.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut prices = Vec::with_capacity(px.len());
    let mut level = px[0];
    prices.push(level);
    for d in increments {
        level += d;
        prices.push(level);
    }
    TickSeries::new(series.id.clone(), series.timestamps().to_vec(), prices)
}

/// Random walk of `±level_spacing` steps with self-reinforcing levels.
///
/// The walk runs the same level tracker as the classifier with stripe width
/// equal to the step, so its levels are exactly the ones the classifier
/// finds on the returned path. While the price sits in the stripe of a
/// level during a trial, the next step returns to the entry side with
/// [`StickyParams::reflect_probability`]; otherwise steps are fair coin
/// flips. When several stripes hold the price, the level with the most
/// bounces decides.
pub fn gen_sticky_level<T: Scalar>(spec: &SurrogateSpec) -> Result<ResampledSeries<T>> {
    let params = match spec.kind {
        SurrogateKind::StickyLevel(p) => p,
        _ => {
            return Err(Error::InvalidSurrogate(
                "gen_sticky_level needs a StickyLevel spec".into(),
            ))
        }
    };
    params.validate()?;
    if spec.length < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: spec.length,
        });
    }
    let step = f64::from(params.level_spacing);
    let mut rng = spec.rng();
    let mut tracker = LevelTracker::<f64>::new(step);
    let mut closed = Vec::new();
    let mut price = 0.0f64;
    let mut prices = Vec::with_capacity(spec.length);
    for _ in 0..spec.length {
        prices.push(T::of(price));
        tracker.push(price, &mut closed);
        closed.clear();
        let strongest = tracker
            .open_trials()
            .max_by_key(|t| (t.level.bounces, std::cmp::Reverse(t.level.created_at)));
        let up = match strongest {
            Some(trial) => {
                let back = rng.random_bool(params.reflect_probability(trial.level.bounces));
                let entry_up = trial.entry == StripeSide::Above;
                back == entry_up
            }
            None => rng.random_bool(0.5),
        };
        price += if up { step } else { -step };
    }
    Ok(ResampledSeries::from_prices(
        SeriesId::new("STICKY", format!("s{}", spec.seed)),
        prices,
    ))
}
