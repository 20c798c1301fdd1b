use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use bounce_lab::features::{build_histogram, extract_features, write_features_csv, Binning, Pairing};
use bounce_lab::inference::powerlaw_fit;
use bounce_lab::level_engine::analyze_series;
use bounce_lab::{Feature, Hist, PowerLaw};
use serde::Serialize;

use crate::config::{FitRange, RunConfig};
use crate::days::{for_each_day, plan_days};
use crate::output::Staging;

#[derive(Debug, Clone, Serialize)]
pub struct Distribution {
    pub samples: usize,
    pub histogram: Hist,
    /// Absent when fewer than three bins in the fit range are occupied.
    pub fit: Option<PowerLaw>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleFeatures {
    pub scale: u32,
    pub recurrence_time: Option<Distribution>,
    pub max_excursion: Option<Distribution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeaturesReport {
    pub pairing: String,
    pub binning: Binning,
    pub scales: Vec<ScaleFeatures>,
    pub warnings: Vec<String>,
}

pub struct FeaturesRun {
    pub report: FeaturesReport,
    pub features: Vec<Feature>,
}

pub fn features(config: &RunConfig) -> Result<FeaturesRun> {
    let days = plan_days(config)?;
    let per_day = for_each_day(&days, |day| {
        let ticks = day.ticks(config)?;
        config
            .scales
            .iter()
            .map(|&scale| {
                let series = day.series(&ticks, scale, config)?;
                let run = analyze_series(series, config.stripe_multiplier, config.jump)
                    .with_context(|| format!("classifying {} at scale {scale}", day.id))?;
                Ok(extract_features(&run.series, &run.trials, config.pairing)?)
            })
            .collect::<Result<Vec<Vec<Feature>>>>()
    })?;

    let mut scales = Vec::with_capacity(config.scales.len());
    let mut all = Vec::new();
    let mut warnings = Vec::new();
    for (j, &scale) in config.scales.iter().enumerate() {
        let pooled: Vec<&Feature> = per_day.iter().flat_map(|d| &d[j]).collect();
        if pooled.is_empty() {
            warnings.push(format!("scale {scale}: no level was entered twice"));
        }
        let times: Vec<f64> = pooled.iter().map(|f| f.recurrence_time as f64).collect();
        let excursions: Vec<f64> = pooled.iter().map(|f| f.max_excursion).collect();
        scales.push(ScaleFeatures {
            scale,
            recurrence_time: distribution(&times, config)?,
            max_excursion: distribution(&excursions, config)?,
        });
        all.extend(pooled.into_iter().cloned());
    }
    Ok(FeaturesRun {
        report: FeaturesReport {
            pairing: match config.pairing {
                Pairing::Consecutive => "consecutive".into(),
                Pairing::BouncePairs => "bounce_pairs".into(),
            },
            binning: config.binning,
            scales,
            warnings,
        },
        features: all,
    })
}

fn distribution(samples: &[f64], config: &RunConfig) -> Result<Option<Distribution>> {
    if samples.is_empty() {
        return Ok(None);
    }
    let histogram = build_histogram(samples, config.binning, config.bins)?;
    let range = fit_range(&histogram, config.fit_range);
    Ok(Some(Distribution {
        samples: samples.len(),
        fit: powerlaw_fit(&histogram, range).ok(),
        histogram,
    }))
}

/// Resolves the configured range against the occupied bins of `hist`.
pub fn fit_range(hist: &Hist, range: FitRange) -> Option<(f64, f64)> {
    match range {
        FitRange::All => None,
        FitRange::Between(lo, hi) => Some((lo, hi)),
        FitRange::MiddleDecade => {
            let occupied: Vec<f64> = hist
                .centers()
                .into_iter()
                .zip(&hist.counts)
                .filter(|&(c, &n)| n > 0 && c > 0.0)
                .map(|(c, _)| c)
                .collect();
            let (&lo, &hi) = (occupied.first()?, occupied.last()?);
            if hi / lo <= 10.0 {
                return None;
            }
            let centre = (lo * hi).sqrt();
            let half = 10f64.sqrt();
            Some((centre / half, centre * half))
        }
    }
}

/// Writes `features.csv`, `features_report.json` and plot-ready
/// `hist_<feature>_<scale>.csv` files.
pub fn cmd_features(config: &RunConfig) -> Result<(Vec<PathBuf>, Vec<String>)> {
    let run = features(config)?;
    let mut out = Staging::new(&config.output_dir)?;
    out.write_with("features.csv", |w| Ok(write_features_csv(&run.features, w)?))?;
    out.write_json("features_report.json", &run.report)?;
    for s in &run.report.scales {
        for (name, dist) in [("recurrence_time", &s.recurrence_time), ("max_excursion", &s.max_excursion)] {
            let Some(dist) = dist else { continue };
            out.write_with(&format!("hist_{name}_{}.csv", s.scale), |w| {
                writeln!(w, "center,count,density")?;
                let h = &dist.histogram;
                for ((c, n), d) in h.centers().iter().zip(&h.counts).zip(&h.density) {
                    writeln!(w, "{c},{n},{d}")?;
                }
                Ok(())
            })?;
        }
    }
    Ok((out.commit()?, run.report.warnings))
}
