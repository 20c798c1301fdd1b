//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # analyse 100 sticky-level days at the generator's own sampling
//! surrogate = sticky
//! bounce_bias = 0.8
//! days = 100
//! scales = 1
//! mode = ticks
//! seed = 7
//! output_dir = out/sticky
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory holding the config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use bounce_lab::features::{Binning, Pairing};
use bounce_lab::inference::{CenterEstimate, DfaConfig};
use bounce_lab::level_engine::JumpPolicy;
use bounce_lab::market_data::{StickyParams, TickLayout};
use bounce_lab::ResampleMode;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "BOUNCE_LAB_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    FractionalWalk { hurst: f64 },
    StickyLevel(StickyParams),
}

/// Synthetic days produced in place of tick files.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDays {
    pub generator: Generator,
    pub days: usize,
    /// Steps per day.
    pub length: usize,
    pub layout: TickLayout,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    /// A tick CSV file or a directory of them.
    Files(PathBuf),
    Generated(GeneratedDays),
}

/// Which histogram bins enter a power-law fit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum FitRange {
    /// One decade centred (in log scale) on the occupied range.
    #[default]
    MiddleDecade,
    All,
    Between(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Input,
    /// Replace every day's returns by a seeded permutation of themselves.
    pub shuffle: bool,
    pub scales: Vec<u32>,
    pub mode: ResampleMode,
    pub max_b: u32,
    pub alpha: f64,
    pub dof: u32,
    pub center: CenterEstimate,
    pub stripe_multiplier: f64,
    pub jump: JumpPolicy,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub pairing: Pairing,
    pub binning: Binning,
    pub bins: usize,
    pub fit_range: FitRange,
    pub dfa: DfaConfig,
}

impl RunConfig {
    /// Default settings reading tick files from `input`.
    pub fn for_input(input: Input) -> Self {
        Self {
            input,
            shuffle: false,
            scales: vec![45, 60, 90, 180],
            mode: ResampleMode::PhysicalSeconds,
            max_b: 4,
            alpha: 0.05,
            dof: 2,
            center: CenterEstimate::InverseVariance,
            stripe_multiplier: 1.0,
            jump: JumpPolicy::default(),
            seed: 0,
            output_dir: PathBuf::from("out"),
            pairing: Pairing::default(),
            binning: Binning::Logarithmic,
            bins: 30,
            fit_range: FitRange::default(),
            dfa: DfaConfig::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base).with_context(|| format!("in config {}", path.display()))
    }

    /// Parses config text; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries = Entries::read(text)?;
        let input = match (entries.take("input"), entries.take("surrogate")) {
            (Some(_), Some(_)) => bail!("`input` and `surrogate` are mutually exclusive"),
            (None, None) => bail!("one of `input` or `surrogate` is required"),
            (Some(path), None) => Input::Files(base.join(path.value)),
            (None, Some(kind)) => Input::Generated(generated_days(&kind, &mut entries)?),
        };
        let mut config = Self::for_input(input);
        config.output_dir = base.join(&config.output_dir);
        if let Some(e) = entries.take("shuffle") {
            config.shuffle = e.parse_bool()?;
        }
        if let Some(e) = entries.take("scales") {
            config.scales = parse_scales(&e.value).map_err(|m| e.error(m))?;
        }
        if let Some(e) = entries.take("mode") {
            config.mode = e.parse()?;
        }
        entries.set("max_b", &mut config.max_b)?;
        entries.set("alpha", &mut config.alpha)?;
        entries.set("dof", &mut config.dof)?;
        if let Some(e) = entries.take("center") {
            config.center = match e.value.as_str() {
                "inverse_variance" => CenterEstimate::InverseVariance,
                "mean" => CenterEstimate::PlainMean,
                other => CenterEstimate::Fixed(other.parse().map_err(|_| {
                    e.error("expected inverse_variance, mean or a number".into())
                })?),
            };
        }
        entries.set("stripe_multiplier", &mut config.stripe_multiplier)?;
        if let Some(e) = entries.take("jump_policy") {
            config.jump = match e.value.as_str() {
                "break" => JumpPolicy::BreakSilently,
                "cross" => JumpPolicy::CountAsCross,
                _ => return Err(e.error("expected break or cross".into())),
            };
        }
        entries.set("seed", &mut config.seed)?;
        if let Some(e) = entries.take("output_dir") {
            config.output_dir = base.join(e.value);
        }
        if let Some(e) = entries.take("pairing") {
            config.pairing = e.parse()?;
        }
        if let Some(e) = entries.take("binning") {
            config.binning = e.parse()?;
        }
        entries.set("bins", &mut config.bins)?;
        if let Some(e) = entries.take("fit_range") {
            config.fit_range = parse_fit_range(&e.value).map_err(|m| e.error(m))?;
        }
        entries.set("dfa_window_min", &mut config.dfa.window_min)?;
        if let Some(e) = entries.take("dfa_window_max") {
            config.dfa.window_max = Some(e.parse()?);
        }
        entries.set("dfa_windows", &mut config.dfa.n_windows)?;
        entries.finish()?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() || self.scales.contains(&0) {
            bail!("scales must be a non-empty list of positive integers");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            bail!("alpha must lie in (0, 1), got {}", self.alpha);
        }
        if self.max_b < 2 {
            bail!("max_b must be at least 2 for the independence test, got {}", self.max_b);
        }
        if self.dof == 0 {
            bail!("dof must be at least 1");
        }
        if !(self.stripe_multiplier > 0.0 && self.stripe_multiplier.is_finite()) {
            bail!("stripe_multiplier must be positive, got {}", self.stripe_multiplier);
        }
        if self.bins < 2 {
            bail!("bins must be at least 2, got {}", self.bins);
        }
        if let FitRange::Between(lo, hi) = self.fit_range {
            if !(lo > 0.0 && lo < hi) {
                bail!("fit_range needs 0 < lo < hi, got {lo},{hi}");
            }
        }
        if let Input::Generated(g) = &self.input {
            if g.days == 0 {
                bail!("days must be at least 1");
            }
        }
        Ok(())
    }
}

fn generated_days(kind: &Entry, entries: &mut Entries) -> Result<GeneratedDays> {
    let generator = match kind.value.as_str() {
        "fbm" => {
            let hurst = entries
                .take("hurst")
                .ok_or_else(|| kind.error("surrogate = fbm needs `hurst`".into()))?
                .parse()?;
            Generator::FractionalWalk { hurst }
        }
        "sticky" => {
            let mut params = StickyParams::new(1, 0.8);
            entries.set("level_spacing", &mut params.level_spacing)?;
            entries.set("bounce_bias", &mut params.bounce_bias)?;
            entries.set("trust_ramp", &mut params.trust_ramp)?;
            Generator::StickyLevel(params)
        }
        "shuffled" => {
            return Err(kind.error(
                "shuffled days are built from other days; set `shuffle = true` instead".into(),
            ))
        }
        _ => return Err(kind.error("expected fbm or sticky".into())),
    };
    // Fractional noise has unit step variance; a fifth of a tick per step
    // keeps one-minute moves at a few ticks, like liquid stocks.
    let default_ticks = match generator {
        Generator::FractionalWalk { .. } => 0.2,
        Generator::StickyLevel(_) => 1.0,
    };
    let mut days = GeneratedDays {
        generator,
        days: 1,
        length: 30_600,
        layout: TickLayout {
            ticks_per_unit: default_ticks,
            ..TickLayout::default()
        },
    };
    entries.set("days", &mut days.days)?;
    entries.set("length", &mut days.length)?;
    entries.set("seconds_per_step", &mut days.layout.seconds_per_step)?;
    entries.set("ticks_per_unit", &mut days.layout.ticks_per_unit)?;
    entries.set("base_price", &mut days.layout.base_price)?;
    Ok(days)
}

/// Parses `45,60,90,180`.
pub fn parse_scales(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| format!("`{}` is not a positive integer scale", s.trim()))
        })
        .collect()
}

fn parse_fit_range(text: &str) -> Result<FitRange, String> {
    match text {
        "decade" => Ok(FitRange::MiddleDecade),
        "all" => Ok(FitRange::All),
        _ => {
            let parts: Vec<f64> = text
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| "expected decade, all or lo,hi".to_string())?;
            match parts[..] {
                [lo, hi] => Ok(FitRange::Between(lo, hi)),
                _ => Err("expected decade, all or lo,hi".into()),
            }
        }
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

impl Entry {
    fn error(&self, message: String) -> anyhow::Error {
        anyhow!("line {}: `{}`: {message}", self.line, self.key)
    }

    fn parse<V: FromStr>(&self) -> Result<V>
    where
        V::Err: fmt::Display,
    {
        self.value
            .parse()
            .map_err(|e: V::Err| self.error(format!("invalid value `{}` ({e})", self.value)))
    }

    fn parse_bool(&self) -> Result<bool> {
        match self.value.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(self.error("expected true or false".into())),
        }
    }
}

/// Key-value pairs not yet consumed.
struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn read(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let entry = Entry {
                key: key.trim().to_string(),
                value: value.trim().to_string(),
                line: i + 1,
            };
            if entry.key.is_empty() {
                bail!("line {}: missing key", i + 1);
            }
            if let Some(prev) = map.insert(entry.key.clone(), entry) {
                bail!("line {}: `{}` is set twice", i + 1, prev.key);
            }
        }
        Ok(Self(map))
    }

    fn take(&mut self, key: &str) -> Option<Entry> {
        self.0.remove(key)
    }

    fn set<V: FromStr>(&mut self, key: &str, slot: &mut V) -> Result<()>
    where
        V::Err: fmt::Display,
    {
        if let Some(e) = self.take(key) {
            *slot = e.parse()?;
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self.0.into_values().min_by_key(|e| e.line) {
            Some(e) => Err(e.error("unknown or misplaced key".into())),
            None => Ok(()),
        }
    }
}
