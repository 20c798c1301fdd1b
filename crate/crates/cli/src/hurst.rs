use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use bounce_lab::features::{build_histogram, Binning};
use bounce_lab::inference::dfa_hurst_with;
use bounce_lab::{Hist, Hurst};
use serde::Serialize;

use crate::analyze::mean;
use crate::config::RunConfig;
use crate::days::{for_each_day, plan_days};
use crate::output::Staging;

#[derive(Debug, Clone, Serialize)]
pub struct DayHurst {
    pub symbol: String,
    pub day: String,
    pub scale: u32,
    pub hurst: f64,
    pub fit_stderr: f64,
}

/// Per-scale summary; the histogram is the distribution of daily estimates.
#[derive(Debug, Clone, Serialize)]
pub struct HurstSummary {
    pub scale: u32,
    pub days: usize,
    pub mean_hurst: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub histogram: Hist,
}

#[derive(Debug, Clone, Serialize)]
pub struct HurstReport {
    pub mode: String,
    pub shuffle: bool,
    pub seed: u64,
    pub scales: Vec<HurstSummary>,
    pub per_day: Vec<DayHurst>,
}

pub fn hurst(config: &RunConfig) -> Result<HurstReport> {
    let days = plan_days(config)?;
    let per_day = for_each_day(&days, |day| {
        let ticks = day.ticks(config)?;
        config
            .scales
            .iter()
            .map(|&scale| {
                let series = day.series(&ticks, scale, config)?;
                let est: Hurst = dfa_hurst_with(&series.increments(), &config.dfa)
                    .with_context(|| format!("estimating H for {} at scale {scale}", day.id))?;
                Ok(DayHurst {
                    symbol: day.id.symbol.clone(),
                    day: day.id.day.clone(),
                    scale,
                    hurst: est.hurst,
                    fit_stderr: est.fit_stderr,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut scales = Vec::with_capacity(config.scales.len());
    for (j, &scale) in config.scales.iter().enumerate() {
        let values: Vec<f64> = per_day.iter().map(|d| d[j].hurst).collect();
        let m = mean(&values).unwrap_or(f64::NAN);
        let n = values.len();
        let std_dev = if n > 1 {
            (values.iter().map(|h| (h - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        scales.push(HurstSummary {
            scale,
            days: n,
            mean_hurst: m,
            std_dev,
            std_error: std_dev / (n as f64).sqrt(),
            histogram: build_histogram(&values, Binning::Linear, config.bins)?,
        });
    }
    // day-major within each scale, matching the summary order
    let per_day = (0..config.scales.len())
        .flat_map(|j| per_day.iter().map(move |d| d[j].clone()))
        .collect();
    Ok(HurstReport {
        mode: config.mode.to_string(),
        shuffle: config.shuffle,
        seed: config.seed,
        scales,
        per_day,
    })
}

/// Writes `hurst.csv`, `hurst_report.json` and one `hurst_hist_<scale>.csv`
/// per scale.
pub fn cmd_hurst(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let report = hurst(config)?;
    let mut out = Staging::new(&config.output_dir)?;
    out.write_with("hurst.csv", |w| {
        writeln!(w, "symbol,day,scale,hurst,fit_stderr")?;
        for d in &report.per_day {
            writeln!(w, "{},{},{},{},{}", d.symbol, d.day, d.scale, d.hurst, d.fit_stderr)?;
        }
        Ok(())
    })?;
    out.write_json("hurst_report.json", &report)?;
    for s in &report.scales {
        out.write_with(&format!("hurst_hist_{}.csv", s.scale), |w| {
            writeln!(w, "bin_lo,bin_hi,count,density")?;
            let h = &s.histogram;
            for (i, (&count, &density)) in h.counts.iter().zip(&h.density).enumerate() {
                writeln!(w, "{},{},{count},{density}", h.bin_edges[i], h.bin_edges[i + 1])?;
            }
            Ok(())
        })?;
    }
    out.commit()
}
