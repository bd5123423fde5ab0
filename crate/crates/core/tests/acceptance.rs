//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

mod common;

use std::path::Path;
use std::time::Instant;

use gaitevents::compare::{compare_directory, CompareOptions, ExternalSource, EVENTS_SUFFIX};
use gaitevents::detectors::{detect_bonci, detect_method, detect_zeni};
use gaitevents::evaluation::{format_compare_table, match_events, summarize, Matching, DEFAULT_BIN_WIDTH_MS};
use gaitevents::events::save_events;
use gaitevents::signal::{butterworth_zero_phase, find_extrema, ExtremumKind, FilterKind, Series};
use gaitevents::trial::save_trial;
use gaitevents::{
    estimate_gait_context, events_from_grf, DetectorConfig, EventKind, GaitContext, GaitEvent, Method, Side, Trial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{matched, suite, suite_specs};

const SUITE_SIZE: usize = 100;
const MAX_MEAN_ABS_MS: f64 = 60.0;
const ZENI_MAX_MEAN_ABS_MS: f64 = 10.0;
const RUNTIME_BUDGET_S: f64 = 30.0;
const NOISE_STD: f64 = 0.002;
const MIN_NOISY_DETECTION: f64 = 0.95;
const GOLDEN: &str = "tests/golden/compare_table.md";

struct Outcome {
    name: &'static str,
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn print(&self) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", self.name, self.detail);
        for f in &self.failures {
            println!("     - {f}");
        }
    }
}

fn pooled_by_method(trials: &[(Trial, gaitevents::TruthSchedule)], cfg: &DetectorConfig) -> Vec<(Method, Matching)> {
    Method::ALL
        .iter()
        .map(|&m| {
            let mut pooled = Matching::default();
            for (trial, schedule) in trials {
                let ctx = estimate_gait_context(trial).expect("gait context");
                let truth = schedule.events();
                let pred = detect_method(m, trial, &ctx, cfg).map(|r| r.events).unwrap_or_default();
                pooled.extend(matched(&trial.id, &truth, &pred));
            }
            (m, pooled)
        })
        .collect()
}

fn oracle_accuracy() -> Outcome {
    let cfg = DetectorConfig::default();
    let start = Instant::now();
    let trials = suite(SUITE_SIZE, 0.0);
    let pooled = pooled_by_method(&trials, &cfg);
    let elapsed = start.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (m, matching) in &pooled {
        let r = summarize(m.id(), matching, 0.0, DEFAULT_BIN_WIDTH_MS);
        if !matching.missed.is_empty() || !matching.spurious.is_empty() {
            failures.push(format!("{m}: {} missed, {} spurious", matching.missed.len(), matching.spurious.len()));
        }
        let limit = if *m == Method::Zeni { ZENI_MAX_MEAN_ABS_MS } else { MAX_MEAN_ABS_MS };
        for kind in EventKind::BOTH {
            let mae = r.kind(kind).mean_abs_ms.unwrap_or(f64::INFINITY);
            worst = worst.max(mae);
            if mae > limit + 1e-9 {
                failures.push(format!("{m} {kind}: mean |delta| {mae:.2} ms > {limit} ms"));
            }
        }
    }
    if elapsed >= RUNTIME_BUDGET_S {
        failures.push(format!("runtime {elapsed:.1} s >= {RUNTIME_BUDGET_S} s"));
    }
    Outcome {
        name: "oracle accuracy",
        failures,
        detail: format!("{SUITE_SIZE} trials x 7 methods, worst mean |delta| {worst:.2} ms, {elapsed:.1} s"),
    }
}

fn ground_truth_exactness() -> Outcome {
    let cfg = DetectorConfig::default();
    let mut failures = Vec::new();
    let mut n = 0;
    for (trial, schedule) in suite(SUITE_SIZE, 0.0) {
        let truth = schedule.events();
        let grf = events_from_grf(&trial, &cfg).expect("grf truth").events;
        let m = match_events(&truth, &grf, 1.0 / trial.sample_rate);
        n += truth.len();
        let off = m.pairs.iter().filter(|p| p.predicted.frame.abs_diff(p.truth.frame) > 1).count();
        if !m.missed.is_empty() || !m.spurious.is_empty() || off > 0 {
            failures.push(format!("{}: {} missed, {} spurious, {off} off by > 1 frame", trial.id, m.missed.len(), m.spurious.len()));
        }
    }
    Outcome { name: "ground-truth exactness", failures, detail: format!("{n} scheduled events within +/-1 frame") }
}

fn evaluator_calibration() -> Outcome {
    let cfg = DetectorConfig::default();
    let trials = suite(10, 0.0);
    let mut identity = Matching::default();
    let mut base = Matching::default();
    let mut shifted = Matching::default();
    for (trial, schedule) in &trials {
        let truth = schedule.events();
        let ctx = estimate_gait_context(trial).unwrap();
        let pred = detect_zeni(trial, &ctx, &cfg).unwrap().events;
        let later: Vec<GaitEvent> = pred.iter().map(|e| GaitEvent { time: e.time + 0.010, ..e.clone() }).collect();
        identity.extend(matched(&trial.id, &truth, &truth));
        base.extend(matched(&trial.id, &truth, &pred));
        shifted.extend(matched(&trial.id, &truth, &later));
    }
    let id = summarize("truth", &identity, 0.0, DEFAULT_BIN_WIDTH_MS);
    let b = summarize("zeni", &base, 0.0, DEFAULT_BIN_WIDTH_MS);
    let s = summarize("zeni+10ms", &shifted, 0.0, DEFAULT_BIN_WIDTH_MS);
    let mut failures = Vec::new();
    for kind in EventKind::BOTH {
        let k = id.kind(kind);
        if k.mean_ms != Some(0.0) || k.std_ms != Some(0.0) || k.detection_rate != Some(1.0) {
            failures.push(format!("identity {kind}: mean {:?}, std {:?}, rate {:?}", k.mean_ms, k.std_ms, k.detection_rate));
        }
        let (kb, ks) = (b.kind(kind), s.kind(kind));
        let dm = ks.mean_ms.unwrap() - kb.mean_ms.unwrap();
        let ds = (ks.std_ms.unwrap() - kb.std_ms.unwrap()).abs();
        if (dm - 10.0).abs() > 0.01 || ds > 1e-6 || ks.n_matched != kb.n_matched {
            failures.push(format!("shift {kind}: mean moved {dm:.4} ms, std moved {ds:.2e} ms"));
        }
    }
    Outcome { name: "evaluator calibration", failures, detail: "identity 0.0/0.0 ms at 100%, +10 ms shift".into() }
}

fn key(e: &GaitEvent) -> (Side, EventKind, usize) {
    (e.side, e.kind, e.frame)
}

fn sorted_keys(events: &[GaitEvent]) -> Vec<(Side, EventKind, usize)> {
    let mut k: Vec<_> = events.iter().map(key).collect();
    k.sort();
    k
}

/// Brute-force strict maxima with prominence and separation filtering.
fn brute_maxima(v: &[f64], min_sep: usize, prominence: f64) -> Vec<usize> {
    let n = v.len();
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for i in 1..n - 1 {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            let mut left_min = v[i];
            let mut j = i;
            while j > 0 && v[j - 1] <= v[i] {
                j -= 1;
                left_min = left_min.min(v[j]);
            }
            let mut right_min = v[i];
            let mut j = i;
            while j + 1 < n && v[j + 1] <= v[i] {
                j += 1;
                right_min = right_min.min(v[j]);
            }
            let prom = v[i] - left_min.max(right_min);
            if prom >= prominence {
                peaks.push((i, v[i]));
            }
        }
    }
    let mut by_height = peaks.clone();
    by_height.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut kept: Vec<usize> = Vec::new();
    for (i, _) in by_height {
        if kept.iter().all(|&k| k.abs_diff(i) >= min_sep) {
            kept.push(i);
        }
    }
    kept.sort();
    kept
}

fn invariant_suite() -> Outcome {
    let cfg = DetectorConfig::default();
    let mut failures = Vec::new();
    let trials = suite(5, 0.0);
    for (trial, _) in &trials {
        let ctx = estimate_gait_context(trial).unwrap();
        let moved = trial.translated([12.5, -3.25, 0.75]);
        let ctx_moved = estimate_gait_context(&moved).unwrap();
        if (ctx_moved.gait_period - ctx.gait_period).abs() > 1e-9 {
            failures.push(format!("{}: gait period not translation invariant", trial.id));
        }
        let mirrored = trial.mirrored();
        let shift = 40;
        let prefixed = trial.with_static_prefix(shift);
        let fs = trial.sample_rate;
        let margin = (ctx.gait_period * fs).round() as usize;
        let interior = |frame: usize| frame >= margin && frame + margin < trial.frame_count();
        for m in Method::ALL {
            let base = detect_method(m, trial, &ctx, &cfg).unwrap().events;
            let t = detect_method(m, &moved, &ctx_moved, &cfg).unwrap().events;
            if sorted_keys(&base) != sorted_keys(&t) {
                failures.push(format!("{}: {m} not translation invariant", trial.id));
            }
            let mut swapped: Vec<GaitEvent> = detect_method(m, &mirrored, &ctx, &cfg).unwrap().events;
            for e in &mut swapped {
                e.side = e.side.opposite();
            }
            if sorted_keys(&base) != sorted_keys(&swapped) {
                failures.push(format!("{}: {m} not mirror symmetric", trial.id));
            }
            let later = detect_method(m, &prefixed, &ctx, &cfg).unwrap().events;
            for e in base.iter().filter(|e| interior(e.frame)) {
                let hit = later.iter().any(|l| l.side == e.side && l.kind == e.kind && l.frame.abs_diff(e.frame + shift) <= 1);
                if !hit {
                    failures.push(format!("{}: {m} {} {} at {} not shifted by {shift}", trial.id, e.side, e.kind, e.frame));
                }
            }
        }
        let still = GaitContext::new(ctx.gait_period, 0.0);
        let zeni = detect_zeni(trial, &still, &cfg).unwrap().events;
        let bonci = detect_bonci(trial, &still, &cfg).unwrap().events;
        if sorted_keys(&zeni) != sorted_keys(&bonci) {
            failures.push(format!("{}: bonci fallback differs from zeni", trial.id));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50 {
        let n = rng.random_range(20..400);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sep = rng.random_range(1..15);
        let prom = rng.random_range(0.0..0.8);
        let got: Vec<usize> = find_extrema(&v, ExtremumKind::Max, sep, prom).iter().map(|e| e.index).collect();
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let got_min: Vec<usize> = find_extrema(&neg, ExtremumKind::Min, sep, prom).iter().map(|e| e.index).collect();
        let want = brute_maxima(&v, sep, prom);
        if got != want || got_min != want {
            failures.push(format!("extrema series {i}: got {got:?}, want {want:?}"));
        }
    }

    for f in [0.5, 1.0, 2.0, 3.5, 5.0] {
        let x: Series = Series::from_fn(1000, 200.0, |t| (2.0 * std::f64::consts::PI * f * t + 0.3).sin());
        let y = butterworth_zero_phase(&x, 7.0, FilterKind::Lowpass, 4).unwrap();
        let half = (200.0 / f / 2.0).ceil() as usize;
        let lo = 500 - half;
        let argmax = |s: &[f64]| (lo..lo + 2 * half).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
        let (a, b) = (argmax(&x.values), argmax(&y.values));
        if a.abs_diff(b) > 1 {
            failures.push(format!("zero-phase {f} Hz: peak moved {a} -> {b}"));
        }
    }
    Outcome {
        name: "invariant suite",
        failures,
        detail: "translation, mirror, time shift, bonci fallback, 50 extrema series, zero-phase".into(),
    }
}

fn noise_robustness() -> Outcome {
    let cfg = DetectorConfig::default();
    let trials = suite(SUITE_SIZE, NOISE_STD);
    let mut failures = Vec::new();
    let mut lowest: f64 = 1.0;
    for (m, matching) in pooled_by_method(&trials, &cfg) {
        let r = summarize(m.id(), &matching, 0.0, DEFAULT_BIN_WIDTH_MS);
        for kind in EventKind::BOTH {
            let rate = r.kind(kind).detection_rate.unwrap_or(0.0);
            lowest = lowest.min(rate);
            if rate < MIN_NOISY_DETECTION {
                failures.push(format!("{m} {kind}: detection {:.1}%", 100.0 * rate));
            }
        }
    }
    Outcome {
        name: "noise robustness",
        failures,
        detail: format!("{} mm noise, lowest detection rate {:.1}%", NOISE_STD * 1e3, 100.0 * lowest),
    }
}

fn write_compare_fixture(dir: &Path, lstm_dir: &Path) {
    for spec in suite_specs(20, 0.0) {
        let (trial, schedule) = gaitevents::generate(&spec).unwrap();
        save_trial(&trial, dir.join(format!("{}.csv", trial.id))).unwrap();
        let lstm: Vec<GaitEvent> = schedule.events().into_iter().map(|e| GaitEvent { source: "lstm".into(), ..e }).collect();
        save_events(lstm_dir.join(format!("{}{EVENTS_SUFFIX}", trial.id)), &lstm).unwrap();
    }
}

fn report_reproduction() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, lstm_dir) = (tmp.path().join("trials"), tmp.path().join("lstm"));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::create_dir_all(&lstm_dir).unwrap();
    write_compare_fixture(&dir, &lstm_dir);
    let mut opts = CompareOptions {
        externals: vec![ExternalSource { name: "lstm".into(), dir: lstm_dir }],
        jobs: 1,
        ..CompareOptions::default()
    };
    let serial = compare_directory(&dir, &opts).unwrap();
    opts.jobs = 4;
    let parallel = compare_directory(&dir, &opts).unwrap();
    let table = format_compare_table(&serial.rows, serial.trials, serial.skipped.len());
    let table_parallel = format_compare_table(&parallel.rows, parallel.trials, parallel.skipped.len());

    let mut failures = Vec::new();
    if table != table_parallel {
        failures.push("parallel table differs from serial".into());
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &table).unwrap();
    }
    match std::fs::read_to_string(&golden) {
        Ok(want) if want == table => {}
        Ok(want) => failures.push(format!("table differs from golden file:\n{table}\nexpected:\n{want}")),
        Err(e) => failures.push(format!("{}: {e}", golden.display())),
    }
    let header = "| Method | Heel Strike Mean (ms) | Heel Strike STD (ms) | Toe Off Mean (ms) | Toe Off STD (ms) |";
    if !table.starts_with(header) {
        failures.push("first line is not the method/HS/TO header".into());
    }
    Outcome { name: "report reproduction", failures, detail: format!("{} rows incl. lstm, matches {GOLDEN}", serial.rows.len()) }
}

fn main() {
    let outcomes = [
        oracle_accuracy(),
        ground_truth_exactness(),
        evaluator_calibration(),
        invariant_suite(),
        noise_robustness(),
        report_reproduction(),
    ];
    for o in &outcomes {
        o.print();
    }
    let failed = outcomes.iter().filter(|o| !o.failures.is_empty()).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
