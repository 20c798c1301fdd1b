use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use bounce_lab::ResampleMode;
use bounce_lab_cli::config::parse_scales;
use bounce_lab_cli::{cmd_analyze, cmd_features, cmd_hurst, cmd_surrogate, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bounce-lab", version, about = "Bounce statistics at support and resistance levels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conditional bounce probabilities and the independence test.
    Analyze(Common),
    /// DFA Hurst exponent of every day.
    Hurst(Common),
    /// Recurrence-time and excursion distributions with power-law fits.
    Features(Common),
    /// Write synthetic or shuffled days as tick files.
    Surrogate(Common),
}

#[derive(Clone)]
struct Scales(Vec<u32>);

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated resampling scales, e.g. 45,60,90,180.
    #[arg(long, value_parser = |s: &str| parse_scales(s).map(Scales))]
    scales: Option<Scales>,
    #[arg(long, value_parser = |s: &str| s.parse::<ResampleMode>().map_err(|e| e.to_string()))]
    mode: Option<ResampleMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut config = RunConfig::load(&self.config)?;
        if let Some(Scales(scales)) = &self.scales {
            config.scales = scales.clone();
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<()> {
    let written = match &cli.command {
        Command::Analyze(c) => cmd_analyze(&c.config()?)?,
        Command::Hurst(c) => cmd_hurst(&c.config()?)?,
        Command::Features(c) => {
            let (written, warnings) = cmd_features(&c.config()?)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            written
        }
        Command::Surrogate(c) => cmd_surrogate(&c.config()?)?,
    };
    if written.is_empty() {
        return Err(anyhow!("no output was produced"));
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
