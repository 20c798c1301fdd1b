//! End-to-end runs of the `bounce-lab` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bounce_lab::level_engine::read_trials_csv;
use bounce_lab::Trial;
use serde_json::Value;

fn bounce_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bounce-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("BOUNCE_LAB_THREADS")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const STICKY: &str = "surrogate = sticky\nbounce_bias = 0.8\ndays = 3\nlength = 3000\nscales = 1,5\nmode = ticks\nseed = 4\n";

#[test]
fn empty_input_directory_fails_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("ticks")).unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "input = ticks\noutput_dir = out\n");
    let out = bounce_lab(&["analyze", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no input days"), "{}", stderr(&out));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn invalid_hurst_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "surrogate = fbm\nhurst = 1.5\n");
    let out = bounce_lab(&["surrogate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn surrogate_days_are_named_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", STICKY);
    for out_dir in ["a", "b"] {
        let out = bounce_lab(
            &["surrogate", "--config", cfg.to_str().unwrap(), "--out", out_dir],
            dir.path(),
        );
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let mut names: Vec<String> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["SYNTH_d001.csv", "SYNTH_d002.csv", "SYNTH_d003.csv"]);
    for name in &names {
        assert_eq!(
            fs::read(dir.path().join("a").join(name)).unwrap(),
            fs::read(dir.path().join("b").join(name)).unwrap()
        );
    }
}

#[test]
fn written_surrogates_analyse_like_generated_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gen.cfg", &format!("{STICKY}output_dir = days\n"));
    assert!(bounce_lab(&["surrogate", "--config", "gen.cfg"], dir.path()).status.success());
    assert!(bounce_lab(&["analyze", "--config", cfg.to_str().unwrap(), "--out", "direct"], dir.path()).status.success());
    write_config(dir.path(), "files.cfg", "input = days\nscales = 1,5\nmode = ticks\noutput_dir = files\n");
    assert!(bounce_lab(&["analyze", "--config", "files.cfg"], dir.path()).status.success());
    assert_eq!(
        fs::read(dir.path().join("direct/trials.csv")).unwrap(),
        fs::read(dir.path().join("files/trials.csv")).unwrap()
    );
}

#[test]
fn class_totals_account_for_every_trial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", STICKY);
    let out = bounce_lab(&["analyze", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));

    let trials: Vec<Trial> =
        read_trials_csv(fs::File::open(dir.path().join("out/trials.csv")).unwrap()).unwrap();
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    let max_b = report["max_b"].as_u64().unwrap() as u32;
    let mut tabled = 0;
    for scale in report["scales"].as_array().unwrap() {
        for kind in scale["kinds"].as_array().unwrap() {
            let counts = &kind["counts"];
            let n: u64 = counts["trials"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
            tabled += n;
            for (b, stats) in kind["stats"].as_array().unwrap().iter().enumerate() {
                assert_eq!(stats["b_prev"].as_u64().unwrap(), b as u64 + 1);
            }
            assert_eq!(kind["day_tests"].as_array().unwrap().len(), 3);
        }
    }
    let in_table = trials.iter().filter(|t| (1..=max_b).contains(&t.b_prev)).count() as u64;
    assert_eq!(tabled, in_table);
    assert!(tabled > 0);
    for scale in [1, 5] {
        for kind in ["resistance", "support"] {
            let plot = fs::read_to_string(dir.path().join(format!("out/plot_{kind}_{scale}.csv"))).unwrap();
            assert_eq!(plot.lines().count(), 1 + max_b as usize);
        }
    }
}

#[test]
fn one_day_gives_one_hurst_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        "surrogate = fbm\nhurst = 0.45\nlength = 4096\nscales = 1\nmode = ticks\nticks_per_unit = 5\n",
    );
    let out = bounce_lab(&["hurst", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let table = fs::read_to_string(dir.path().join("out/hurst.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let h: f64 = rows[0].split(',').nth(3).unwrap().parse().unwrap();
    assert!((h - 0.45).abs() < 0.1, "{h}");
}

#[test]
fn no_revisited_level_gives_empty_features_and_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let ticks: String = (0..40).map(|i| format!("{i},{}\n", 100 + i)).collect();
    fs::write(dir.path().join("UP_20240102.csv"), format!("timestamp,price\n{ticks}")).unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "input = UP_20240102.csv\nscales = 1\nmode = ticks\n");
    let out = bounce_lab(&["features", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    let table = fs::read_to_string(dir.path().join("out/features.csv")).unwrap();
    assert_eq!(table.lines().count(), 1);
}

#[test]
fn shuffling_files_requires_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("A_1.csv"), "timestamp,price\n0,1\n1,2\n2,1\n").unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "input = A_1.csv\n");
    let out = bounce_lab(&["surrogate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", STICKY);
    let run = |threads: &str, out_dir: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bounce-lab"))
            .args(["features", "--config", cfg.to_str().unwrap(), "--out", out_dir])
            .current_dir(dir.path())
            .env("BOUNCE_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
    };
    run("1", "one");
    run("3", "three");
    for name in ["features.csv", "features_report.json"] {
        assert_eq!(
            fs::read(dir.path().join("one").join(name)).unwrap(),
            fs::read(dir.path().join("three").join(name)).unwrap()
        );
    }
    let bad = Command::new(env!("CARGO_BIN_EXE_bounce-lab"))
        .args(["features", "--config", cfg.to_str().unwrap(), "--out", "zero"])
        .current_dir(dir.path())
        .env("BOUNCE_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn command_line_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", STICKY);
    let out = bounce_lab(
        &["hurst", "--config", cfg.to_str().unwrap(), "--scales", "2", "--seed", "9", "--out", "o"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("o/hurst_report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 9);
    assert_eq!(report["scales"].as_array().unwrap().len(), 1);
    assert_eq!(report["scales"][0]["scale"], 2);
    let bad = bounce_lab(&["hurst", "--config", cfg.to_str().unwrap(), "--scales", "0"], dir.path());
    assert_ne!(bad.status.code(), Some(0));
}
