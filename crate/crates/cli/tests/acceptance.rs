//! Acceptance run: one PASS/FAIL line per criterion, with the measured
//! values and the runtime against its budget. Exits nonzero if any
//! criterion fails.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bounce_lab::inference::{bayes_estimate, chi2_pvalue, dfa_hurst_with, DfaConfig};
use bounce_lab::level_engine::{classify_events, classify_with, JumpPolicy};
use bounce_lab::market_data::{gen_fractional_walk, SurrogateKind, SurrogateSpec};
use bounce_lab::{LevelKind, Outcome, SeriesId, Series, Trial};
use bounce_lab_cli::{analyze, features, AnalyzeReport, RunConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use oracle::{Kind, OracleTrial, Result_};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(bool, String), String>;

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: "C1", name: "bayes estimator exactness", budget: secs(1), run: bayes_exact },
        Criterion { id: "C2", name: "chi2 p-value exactness", budget: secs(1), run: pvalue_exact },
        Criterion { id: "C3", name: "shuffled null flatness", budget: secs(120), run: shuffled_null },
        Criterion { id: "C4", name: "fBm null at H = 0.45", budget: secs(120), run: fbm_null },
        Criterion { id: "C5", name: "sticky-level positive control", budget: secs(120), run: positive_control },
        Criterion { id: "C6", name: "DFA round trip", budget: secs(60), run: dfa_round_trip },
        Criterion { id: "C7", name: "classifier oracle equivalence", budget: secs(10), run: oracle_equivalence },
        Criterion { id: "C8", name: "first-return scaling", budget: secs(60), run: first_return },
        Criterion { id: "C9", name: "end-to-end determinism", budget: secs(120), run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = took <= c.budget;
        let pass = ok && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {} {}: {detail} [{:.2} s of {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            c.budget.as_secs(),
            if in_time { "" } else { ", over budget" },
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn bayes_exact() -> Check {
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let total = rng.random_range(0..1_000_000i64);
        let n = rng.random_range(0..=total);
        let mean = r(n + 1) / r(total + 2);
        let var = r(n + 1) * r(total - n + 1) / (r(total + 3) * r(total + 2) * r(total + 2));
        let (m, v) = bayes_estimate::<f64>(n, total).map_err(|e| e.to_string())?;
        worst = worst
            .max((m - mean.to_f64().unwrap()).abs())
            .max((v - var.to_f64().unwrap()).abs());
    }
    let empty = bayes_estimate::<f64>(0, 0).map_err(|e| e.to_string())?;
    let ok = worst <= 1e-12 && empty == (0.5, 1.0 / 12.0);
    Ok((ok, format!("max error {worst:.1e} over 10^4 pairs; (0,0) -> ({}, {:.6})", empty.0, empty.1)))
}

fn pvalue_exact() -> Check {
    let mut worst = 0.0f64;
    for i in 0..=50_000 {
        let x = f64::from(i) * 1e-3;
        let p = chi2_pvalue(x, 2).map_err(|e| e.to_string())?;
        worst = worst.max((p - (-x / 2.0).exp()).abs());
    }
    let table = chi2_pvalue(2.292, 2).map_err(|e| e.to_string())?;
    let ok = worst <= 1e-12 && (table - 0.318).abs() <= 1e-3;
    Ok((ok, format!("max error {worst:.1e} on [0, 50]; p(2.292) = {table:.4}")))
}

fn config(text: &str) -> Result<RunConfig, String> {
    RunConfig::parse(text, Path::new(".")).map_err(|e| format!("{e:#}"))
}

/// Checks pooled class means against 0.5 at three standard deviations and
/// counts the days on which the independence test accepts.
fn null_check(report: &AnalyzeReport) -> (bool, String) {
    let mut ok = true;
    let mut worst_z = 0.0f64;
    let mut min_accept = 1.0f64;
    let mut notes = Vec::new();
    for scale in &report.scales {
        for k in &scale.kinds {
            let zs: Vec<f64> = k.stats.iter().map(|s| (s.mean - 0.5) / s.std_dev()).collect();
            let z = zs.iter().fold(0.0f64, |a, z| a.max(z.abs()));
            let accept = 1.0 - k.rejected_days() as f64 / k.day_tests.len() as f64;
            if z > 3.0 || accept < 0.9 {
                ok = false;
                notes.push(format!(
                    "{} {} s: means {:?} z {:?} accepted {:.0}%",
                    k.kind.as_str(),
                    scale.scale,
                    k.means().iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>(),
                    zs.iter().map(|z| format!("{z:+.1}")).collect::<Vec<_>>(),
                    accept * 100.0
                ));
            }
            worst_z = worst_z.max(z);
            min_accept = min_accept.min(accept);
        }
    }
    let mut detail = format!(
        "{} days; largest |mean - 0.5| = {worst_z:.2} sigma; lowest acceptance {:.0}%",
        report.days,
        min_accept * 100.0
    );
    if !notes.is_empty() {
        detail.push_str("; ");
        detail.push_str(&notes.join("; "));
    }
    (ok, detail)
}

fn shuffled_null() -> Check {
    let config = config(
        "surrogate = sticky\nbounce_bias = 0.8\nseconds_per_step = 15\nlength = 2040\n\
         days = 100\nshuffle = true\nscales = 45,60,90,180\nmode = seconds\nseed = 3\n",
    )?;
    let run = analyze(&config).map_err(|e| format!("{e:#}"))?;
    Ok(null_check(&run.report))
}

fn fbm_null() -> Check {
    let config = config(
        "surrogate = fbm\nhurst = 0.45\ndays = 100\nscales = 45,60,90,180\nmode = seconds\nseed = 4\n",
    )?;
    let run = analyze(&config).map_err(|e| format!("{e:#}"))?;
    Ok(null_check(&run.report))
}

fn positive_control() -> Check {
    let config = config("surrogate = sticky\nbounce_bias = 0.8\ndays = 100\nscales = 1\nmode = ticks\nseed = 5\n")?;
    let run = analyze(&config).map_err(|e| format!("{e:#}"))?;
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LevelKind::ALL {
        let k = run.report.kind(1, kind).ok_or("missing kind")?;
        let means = k.means();
        let increasing = means.windows(2).all(|w| w[0] < w[1]);
        let rejected = k.rejected_days() as f64 / k.day_tests.len() as f64;
        ok &= increasing && rejected >= 0.95;
        parts.push(format!(
            "{} means {:?} rejected {:.0}%",
            kind.as_str(),
            means.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>(),
            rejected * 100.0
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn dfa_round_trip() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for hurst in [0.42, 0.45, 0.48, 0.5, 0.8] {
        let mut total = 0.0;
        for seed in 0..20 {
            let spec = SurrogateSpec::new(SurrogateKind::FractionalWalk { hurst }, seed, 1 << 14);
            let walk = gen_fractional_walk::<f64>(&spec).map_err(|e| e.to_string())?;
            total += dfa_hurst_with::<f64>(&walk.increments(), &DfaConfig::default())
                .map_err(|e| e.to_string())?
                .hurst;
        }
        let mean = total / 20.0;
        ok &= (mean - hurst).abs() <= 0.03;
        parts.push(format!("{hurst} -> {mean:.4}"));
    }
    Ok((ok, parts.join(", ")))
}

fn as_oracle(t: &Trial) -> OracleTrial {
    (
        t.enter_index,
        t.level_created_at,
        match t.kind {
            LevelKind::Resistance => Kind::Resistance,
            LevelKind::Support => Kind::Support,
        },
        t.level_value,
        t.b_prev,
        match t.outcome {
            Outcome::Bounce => Result_::Bounce,
            Outcome::Cross => Result_::Cross,
        },
        t.exit_index,
    )
}

fn sorted(mut v: Vec<OracleTrial>) -> Vec<OracleTrial> {
    v.sort_by(|a, b| (a.0, a.1, a.2, a.6).cmp(&(b.0, b.1, b.2, b.6)));
    v
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut mismatches, mut trials) = (0, 0);
    for case in 0..1000 {
        let len = rng.random_range(3..=50);
        let mut x: i32 = 0;
        let p: Vec<f64> = (0..len)
            .map(|_| {
                let v = f64::from(x);
                x += match rng.random_range(0..10) {
                    0 | 1 => 0,
                    9 => rng.random_range(-6..=6),
                    _ => rng.random_range(-3..=3),
                };
                v
            })
            .collect();
        let delta = [0.5, 1.0, 2.0][case % 3];
        let series = Series::from_prices(SeriesId::new("R", case.to_string()), p.clone());
        let got = classify_events(&series, delta).map_err(|e| e.to_string())?;
        trials += got.len();
        if sorted(got.iter().map(as_oracle).collect()) != sorted(oracle::classify(&p, delta, false)) {
            mismatches += 1;
        }
        let jumps = classify_with(&series, delta, JumpPolicy::CountAsCross).map_err(|e| e.to_string())?;
        if sorted(jumps.trials.iter().map(as_oracle).collect()) != sorted(oracle::classify(&p, delta, true)) {
            mismatches += 1;
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches over 1000 series ({trials} trials), both jump policies"),
    ))
}

fn first_return() -> Check {
    let config = config("surrogate = sticky\nbounce_bias = 0.5\ndays = 100\nscales = 1\nmode = ticks\nseed = 6\n")?;
    let run = features(&config).map_err(|e| format!("{e:#}"))?;
    let dist = run.report.scales[0].recurrence_time.as_ref().ok_or("no recurrence times")?;
    let fit = dist.fit.as_ref().ok_or("no fit in the middle decade")?;
    Ok((
        (fit.exponent + 1.5).abs() <= 0.3,
        format!(
            "exponent {:.3} over [{:.1}, {:.1}] from {} samples, {} bins, r^2 {:.3}",
            fit.exponent, fit.fit_range.0, fit.fit_range.1, dist.samples, fit.bins_used, fit.r_squared
        ),
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(
        dir.path().join("run.cfg"),
        "surrogate = fbm\nhurst = 0.45\ndays = 12\nlength = 8000\nshuffle = true\nseed = 11\n",
    )
    .map_err(|e| e.to_string())?;
    let mut compared = 0;
    for command in ["analyze", "hurst", "features"] {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            let out_dir = format!("{command}_{threads}");
            let status = Command::new(env!("CARGO_BIN_EXE_bounce-lab"))
                .args([command, "--config", "run.cfg", "--out", &out_dir])
                .current_dir(dir.path())
                .env("BOUNCE_LAB_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(String::from_utf8_lossy(&status.stderr).into_owned());
            }
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path().join(&out_dir))
                .map_err(|e| e.to_string())?
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
                })
                .collect();
            files.sort();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            return Ok((false, format!("{command} outputs differ between 1 and 4 threads")));
        }
        compared += outputs[0].len();
    }
    Ok((true, format!("{compared} files byte-identical across runs with 1 and 4 threads")))
}
