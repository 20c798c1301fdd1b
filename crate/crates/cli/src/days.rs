//! Where symbol-days come from and how each one gets its random streams.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bounce_lab::market_data::{
    day_rng, load_ticks, resample, shuffle_returns, split_stem, SurrogateKind, SurrogateSpec,
};
use bounce_lab::{SeriesId, Series, TickSeries};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{GeneratedDays, Generator, Input, RunConfig, THREADS_ENV};

pub const SYNTH_SYMBOL: &str = "SYNTH";

/// One symbol-day of the run. `index` is its position in the sorted day
/// list and selects its random streams.
#[derive(Debug, Clone)]
pub struct Day {
    pub index: usize,
    pub id: SeriesId,
    path: Option<PathBuf>,
}

impl Day {
    /// Reads or generates the day's trades, before any shuffling.
    pub fn ticks(&self, config: &RunConfig) -> Result<TickSeries> {
        match (&self.path, &config.input) {
            (Some(path), _) => load_ticks(path).with_context(|| format!("loading {}", path.display())),
            (None, Input::Generated(gen)) => {
                let spec = surrogate_spec(gen, self.generator_seed(config.seed));
                spec.to_ticks(self.id.clone(), &gen.layout)
                    .with_context(|| format!("generating day {}", self.id))
            }
            (None, Input::Files(_)) => unreachable!("file days always carry a path"),
        }
    }

    /// The day resampled at `scale`, shuffled when the run asks for it.
    pub fn series(&self, ticks: &TickSeries, scale: u32, config: &RunConfig) -> Result<Series> {
        let series = resample(ticks, scale, config.mode)
            .with_context(|| format!("resampling {} at scale {scale}", self.id))?;
        if !config.shuffle {
            return Ok(series);
        }
        let seed = self.scale_seed(config.seed, scale);
        shuffle_returns(&series, seed).with_context(|| format!("shuffling {} at scale {scale}", self.id))
    }

    pub fn generator_seed(&self, root: u64) -> u64 {
        day_seeds(root, self.index).0
    }

    pub fn tick_shuffle_seed(&self, root: u64) -> u64 {
        day_seeds(root, self.index).1
    }

    pub fn scale_seed(&self, root: u64, scale: u32) -> u64 {
        day_rng(root, stream_id(self.index, scale)).random()
    }
}

/// Stream `(index << 32) | scale`; scale 0 is the day's own stream.
fn stream_id(index: usize, scale: u32) -> u64 {
    ((index as u64) << 32) | u64::from(scale)
}

/// Generator and trade-shuffle seeds of day `index`.
fn day_seeds(root: u64, index: usize) -> (u64, u64) {
    let mut rng = day_rng(root, stream_id(index, 0));
    (rng.random(), rng.random())
}

pub fn surrogate_spec(gen: &GeneratedDays, seed: u64) -> SurrogateSpec {
    let kind = match gen.generator {
        Generator::FractionalWalk { hurst } => SurrogateKind::FractionalWalk { hurst },
        Generator::StickyLevel(p) => SurrogateKind::StickyLevel(p),
    };
    SurrogateSpec::new(kind, seed, gen.length)
}

/// Lists the run's days in `(symbol, day)` order.
pub fn plan_days(config: &RunConfig) -> Result<Vec<Day>> {
    let mut days = match &config.input {
        Input::Files(path) => file_days(path)?,
        Input::Generated(gen) => {
            let width = gen.days.to_string().len().max(3);
            (0..gen.days)
                .map(|k| Day {
                    index: 0,
                    id: SeriesId::new(SYNTH_SYMBOL, format!("d{:0width$}", k + 1)),
                    path: None,
                })
                .collect()
        }
    };
    days.sort_by(|a, b| (&a.id.symbol, &a.id.day).cmp(&(&b.id.symbol, &b.id.day)));
    for (k, day) in days.iter_mut().enumerate() {
        day.index = k;
    }
    Ok(days)
}

fn file_days(path: &Path) -> Result<Vec<Day>> {
    let files = if path.is_dir() {
        let mut files = Vec::new();
        let entries = std::fs::read_dir(path)
            .with_context(|| format!("cannot list {}", path.display()))?;
        for entry in entries {
            let p = entry?.path();
            if p.is_file() && p.extension().is_some_and(|e| e == "csv") {
                files.push(p);
            }
        }
        files
    } else if path.is_file() {
        vec![path.to_path_buf()]
    } else {
        bail!("input {} does not exist", path.display());
    };
    if files.is_empty() {
        bail!("no input days in {}", path.display());
    }
    Ok(files
        .into_iter()
        .map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Day {
                index: 0,
                id: split_stem(&stem),
                path: Some(p),
            }
        })
        .collect())
}

/// Runs `work` on every day on a pool capped by `BOUNCE_LAB_THREADS`.
/// Results come back in day order whatever order the workers finish in.
pub fn for_each_day<R, F>(days: &[Day], work: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&Day) -> Result<R> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("cannot start worker pool")?;
    pool.install(|| days.par_iter().map(&work).collect())
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(None),
    }
}
