use std::path::Path;
use std::process::{Command, Output};

use gaitevents::events::load_events;
use gaitevents::evaluation::load_report;
use gaitevents::trial::{save_trial, MarkerTrajectory, REQUIRED_MARKERS};
use gaitevents::Trial;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaitevents"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &Path, seed: u64, count: u64) {
    let out = run(&[
        "synth", "--cycles", "10", "--period", "1.1", "--speed", "1.2", "--seed", &seed.to_string(), "--count",
        &count.to_string(), "--out-dir", p(dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn version_names_schemas() {
    let out = run(&["--version"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success());
    assert!(text.contains("trial csv schema 1") && text.contains("events csv schema 1") && text.contains("report schema 1"));
}

#[test]
fn synth_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    synth(&a, 3, 1);
    synth(&b, 3, 1);
    for name in ["synth_3.csv", "synth_3.events.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
    }
    // 10 cycles per side plus one boundary toe off and one boundary heel strike.
    assert_eq!(load_events(a.join("synth_3.events.csv")).unwrap().len(), 4 * 10 + 2);
}

#[test]
fn detect_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path(), 0, 1);
    let trial = tmp.path().join("synth_0.csv");
    let events = tmp.path().join("zeni.csv");

    let ok = run(&["detect", "--method", "zeni", "--input", p(&trial), "--out", p(&events)]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(load_events(&events).unwrap().len(), 42);

    let unknown = run(&["detect", "--method", "nope", "--input", p(&trial), "--out", p(&events)]);
    assert_eq!(unknown.status.code(), Some(2));
    let err = String::from_utf8(unknown.stderr).unwrap();
    assert!(err.contains("zeni") && err.contains("bonci"), "{err}");

    let standing = Trial::new(
        "standing",
        200.0,
        REQUIRED_MARKERS.iter().map(|m| MarkerTrajectory::from_points(*m, vec![[0.1, 0.2, 0.9]; 400])),
        None,
        None,
        Default::default(),
    )
    .unwrap();
    let still = tmp.path().join("standing.csv");
    save_trial(&standing, &still).unwrap();
    let fail = run(&["detect", "--method", "zeni", "--input", p(&still), "--out", p(&events)]);
    assert_eq!(fail.status.code(), Some(3));

    let bad_cfg = run(&["detect", "--method", "zeni", "--input", p(&trial), "--out", p(&events), "--set", "debounce=-1"]);
    assert_eq!(bad_cfg.status.code(), Some(2));
}

#[test]
fn evaluate_accepts_any_source() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path(), 1, 1);
    let truth = tmp.path().join("synth_1.events.csv");
    let report = tmp.path().join("r.json");
    let out = run(&["evaluate", "--pred", p(&truth), "--truth", p(&truth), "--out", p(&report)]);
    assert!(out.status.success());
    let r = load_report(&report).unwrap();
    assert_eq!(r.heel_strike.mean_ms, Some(0.0));
    assert_eq!(r.toe_off.std_ms, Some(0.0));
    assert_eq!(r.heel_strike.detection_rate, Some(1.0));

    let lstm = tmp.path().join("lstm.csv");
    let text = std::fs::read_to_string(&truth).unwrap().replace("synth_truth", "lstm");
    std::fs::write(&lstm, text).unwrap();
    let deltas = tmp.path().join("d.csv");
    let out = run(&["evaluate", "--pred", p(&lstm), "--truth", p(&truth), "--out", p(&report), "--deltas", p(&deltas)]);
    assert!(out.status.success());
    let r = load_report(&report).unwrap();
    assert_eq!(r.method, "lstm");
    assert_eq!(r.n_matched(), 42);
    assert_eq!(std::fs::read_to_string(&deltas).unwrap().lines().count(), 43);

    let missing = tmp.path().join("missing.csv");
    let out = run(&["evaluate", "--pred", p(&missing), "--truth", p(&truth), "--out", p(&report)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing.csv"));
}

#[test]
fn compare_over_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let trials = tmp.path().join("trials");
    synth(&trials, 0, 20);
    let (serial, parallel) = (tmp.path().join("serial"), tmp.path().join("parallel"));
    let out = run(&["compare", "--input-dir", p(&trials), "--out-dir", p(&serial), "--jobs", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().filter(|l| l.starts_with("| ") && l.contains("et al.")).count(), 14);
    assert_eq!(table.lines().filter(|l| l.contains("et al.") && l.contains("| 100.0 | 100.0 |")).count(), 7);
    assert!(table.contains("Trials: 20 evaluated, 0 skipped"));

    let out = run(&["compare", "--input-dir", p(&trials), "--out-dir", p(&parallel), "--jobs", "4"]);
    assert!(out.status.success());
    for name in ["compare.json", "compare.md", "zeni_deltas.csv", "bonci_deltas.csv"] {
        assert_eq!(std::fs::read(serial.join(name)).unwrap(), std::fs::read(parallel.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn compare_skips_unreadable_trials() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path(), 0, 2);
    std::fs::write(tmp.path().join("broken.csv"), "not a trial\n").unwrap();
    let out_dir = tmp.path().join("out");
    let out = run(&["compare", "--input-dir", p(tmp.path()), "--methods", "zeni,hsue", "--out-dir", p(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("broken.csv"));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Trials: 2 evaluated, 1 skipped"), "{stdout}");
    let merged: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("compare.json")).unwrap()).unwrap();
    assert_eq!(merged["reports"]["zeni"]["skipped_trials"], 1);
    assert_eq!(merged["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn compare_includes_external_predictions() {
    let tmp = tempfile::tempdir().unwrap();
    let trials = tmp.path().join("trials");
    synth(&trials, 5, 2);
    let spec = format!("lstm={}", p(&trials));
    let out = run(&["compare", "--input-dir", p(&trials), "--methods", "zeni", "--external", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.lines().any(|l| l.starts_with("| LSTM |")), "{table}");
}

#[test]
fn compare_rejects_empty_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["compare", "--input-dir", p(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
}
