use std::path::PathBuf;

use anyhow::{bail, Result};
use bounce_lab::market_data::{shuffle_tick_returns, write_ticks};

use crate::config::{Input, RunConfig};
use crate::days::{for_each_day, plan_days};
use crate::output::Staging;

/// Writes one `SYMBOL_DAY.csv` tick file per day of the run.
///
/// Generated days are named `SYNTH_d001.csv`, `SYNTH_d002.csv`, ... With
/// `shuffle = true` each day's trade-to-trade returns are permuted, which
/// turns a directory of tick files into its shuffled-returns surrogate.
pub fn cmd_surrogate(config: &RunConfig) -> Result<Vec<PathBuf>> {
    if matches!(config.input, Input::Files(_)) && !config.shuffle {
        bail!("nothing to generate: set `surrogate` or `shuffle = true`");
    }
    let days = plan_days(config)?;
    let ticks = for_each_day(&days, |day| {
        let ticks = day.ticks(config)?;
        if config.shuffle {
            Ok(shuffle_tick_returns(&ticks, day.tick_shuffle_seed(config.seed))?)
        } else {
            Ok(ticks)
        }
    })?;
    let mut out = Staging::new(&config.output_dir)?;
    for t in &ticks {
        out.write_with(&format!("{}.csv", t.id), |w| Ok(write_ticks(t, w)?))?;
    }
    out.commit()
}
