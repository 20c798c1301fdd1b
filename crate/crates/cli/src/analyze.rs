use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use bounce_lab::inference::{
    aggregate_trials, chi2_independence_with, dfa_hurst_with, ChiSquareConfig, Decision,
    TrialCounts,
};
use bounce_lab::level_engine::{analyze_series, write_trials_csv};
use bounce_lab::{ChiSquare, LevelKind, Stats, Trial};
use serde::Serialize;

use crate::config::RunConfig;
use crate::days::{for_each_day, plan_days};
use crate::output::Staging;

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub days: usize,
    pub mode: String,
    pub shuffle: bool,
    pub seed: u64,
    pub max_b: u32,
    pub alpha: f64,
    pub dof: u32,
    pub stripe_multiplier: f64,
    pub scales: Vec<ScaleReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleReport {
    pub scale: u32,
    /// Stripe width averaged over days.
    pub mean_delta: f64,
    pub hurst: HurstBlock,
    pub kinds: Vec<KindReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HurstBlock {
    /// `None` where the day is too short for the configured windows.
    pub per_day: Vec<DayValue>,
    pub mean_hurst: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DayValue {
    pub symbol: String,
    pub day: String,
    pub hurst: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KindReport {
    pub kind: LevelKind,
    pub stats: Vec<Stats>,
    pub counts: TrialCounts,
    pub chi2: ChiSquare,
    /// The same test on each day alone.
    pub day_tests: Vec<DayTest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DayTest {
    pub symbol: String,
    pub day: String,
    pub statistic: f64,
    pub p_value: f64,
    pub decision: Decision,
}

impl KindReport {
    pub fn means(&self) -> Vec<f64> {
        self.stats.iter().map(|s| s.mean).collect()
    }

    pub fn rejected_days(&self) -> usize {
        self.day_tests
            .iter()
            .filter(|t| t.decision == Decision::IndependenceRejected)
            .count()
    }
}

impl AnalyzeReport {
    pub fn kind(&self, scale: u32, kind: LevelKind) -> Option<&KindReport> {
        self.scales
            .iter()
            .find(|s| s.scale == scale)?
            .kinds
            .iter()
            .find(|k| k.kind == kind)
    }
}

pub struct AnalyzeRun {
    pub report: AnalyzeReport,
    /// Every trial, ordered by scale (as configured), day, then position.
    pub trials: Vec<Trial>,
}

struct DayScale {
    delta: f64,
    hurst: Option<f64>,
    trials: Vec<Trial>,
}

pub fn analyze(config: &RunConfig) -> Result<AnalyzeRun> {
    let days = plan_days(config)?;
    let per_day = for_each_day(&days, |day| {
        let ticks = day.ticks(config)?;
        config
            .scales
            .iter()
            .map(|&scale| {
                let series = day.series(&ticks, scale, config)?;
                let hurst = dfa_hurst_with(&series.increments(), &config.dfa)
                    .ok()
                    .map(|h| h.hurst);
                let run = analyze_series(series, config.stripe_multiplier, config.jump)
                    .with_context(|| format!("classifying {} at scale {scale}", day.id))?;
                Ok(DayScale {
                    delta: run.delta,
                    hurst,
                    trials: run.trials,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let chi_config = ChiSquareConfig {
        alpha: config.alpha,
        dof: config.dof,
        center: config.center,
    };
    let mut scales = Vec::with_capacity(config.scales.len());
    let mut all_trials = Vec::new();
    for (j, &scale) in config.scales.iter().enumerate() {
        let day_scales: Vec<&DayScale> = per_day.iter().map(|d| &d[j]).collect();
        let mut kinds = Vec::with_capacity(2);
        for kind in LevelKind::ALL {
            let mut pooled = TrialCounts::new(kind, config.max_b);
            let mut day_tests = Vec::with_capacity(days.len());
            for (day, ds) in days.iter().zip(&day_scales) {
                let agg = aggregate_trials(&ds.trials, kind, config.max_b);
                let test: ChiSquare = chi2_independence_with(&agg.stats, &chi_config)?;
                day_tests.push(DayTest {
                    symbol: day.id.symbol.clone(),
                    day: day.id.day.clone(),
                    statistic: test.statistic,
                    p_value: test.p_value,
                    decision: test.decision,
                });
                pooled.merge(&agg.counts);
            }
            let stats: Vec<Stats> = pooled.stats();
            let chi2 = chi2_independence_with(&stats, &chi_config)?;
            kinds.push(KindReport {
                kind,
                stats,
                counts: pooled,
                chi2,
                day_tests,
            });
        }
        let per_day_hurst: Vec<DayValue> = days
            .iter()
            .zip(&day_scales)
            .map(|(day, ds)| DayValue {
                symbol: day.id.symbol.clone(),
                day: day.id.day.clone(),
                hurst: ds.hurst,
            })
            .collect();
        let estimates: Vec<f64> = per_day_hurst.iter().filter_map(|d| d.hurst).collect();
        scales.push(ScaleReport {
            scale,
            mean_delta: day_scales.iter().map(|d| d.delta).sum::<f64>() / days.len() as f64,
            hurst: HurstBlock {
                per_day: per_day_hurst,
                mean_hurst: mean(&estimates),
            },
            kinds,
        });
        all_trials.extend(day_scales.iter().flat_map(|d| d.trials.iter().cloned()));
    }

    Ok(AnalyzeRun {
        report: AnalyzeReport {
            days: days.len(),
            mode: config.mode.to_string(),
            shuffle: config.shuffle,
            seed: config.seed,
            max_b: config.max_b,
            alpha: config.alpha,
            dof: config.dof,
            stripe_multiplier: config.stripe_multiplier,
            scales,
        },
        trials: all_trials,
    })
}

pub(crate) fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Writes `report.json`, `trials.csv` and one `plot_<kind>_<scale>.csv`
/// per kind and scale into the output directory.
pub fn cmd_analyze(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let run = analyze(config)?;
    let mut out = Staging::new(&config.output_dir)?;
    out.write_json("report.json", &run.report)?;
    out.write_with("trials.csv", |w| Ok(write_trials_csv(&run.trials, w)?))?;
    for scale in &run.report.scales {
        for k in &scale.kinds {
            let name = format!("plot_{}_{}.csv", k.kind.as_str(), scale.scale);
            out.write_with(&name, |w| {
                writeln!(w, "b_prev,mean,yerr")?;
                for s in &k.stats {
                    writeln!(w, "{},{},{}", s.b_prev, s.mean, s.std_dev())?;
                }
                Ok(())
            })?;
        }
    }
    out.commit()
}
