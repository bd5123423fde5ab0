//! Batch evaluation of several methods over a directory of trials.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::DetectorConfig;
use crate::detectors::{detect_method, Method};
use crate::error::{Error, Result};
use crate::evaluation::{default_window, match_events, summarize, CompareRow, EvaluationReport, Matching, FALLBACK_WINDOW};
use crate::events::{load_events, DetectionResult, GaitEvent};
use crate::ground_truth::events_from_grf;
use crate::scalar::median;
use crate::signal::{estimate_gait_context, GaitContext};
use crate::trial::{load_trial, normalize_coordinates, LoadOptions, Trial};

/// File name suffix of Events CSV files, which trial discovery skips.
pub const EVENTS_SUFFIX: &str = ".events.csv";

/// A named source of precomputed predictions: a directory holding `<trial id>.events.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSource {
    pub name: String,
    pub dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub methods: Vec<Method>,
    pub externals: Vec<ExternalSource>,
    pub config: DetectorConfig,
    pub load: LoadOptions,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub bin_width_ms: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            methods: Method::ALL.to_vec(),
            externals: Vec::new(),
            config: DetectorConfig::default(),
            load: LoadOptions::default(),
            jobs: 0,
            bin_width_ms: crate::evaluation::DEFAULT_BIN_WIDTH_MS,
        }
    }
}

/// Reference events and every method's detections on one trial.
#[derive(Debug, Clone)]
pub struct TrialAnalysis {
    pub trial_id: String,
    pub context: GaitContext,
    pub truth: DetectionResult,
    pub detections: Vec<(Method, Result<DetectionResult, String>)>,
}

/// Normalizes the trial, estimates its gait context, extracts force-plate truth and runs each
/// method. A method that fails yields its error message instead of a result.
pub fn analyze_trial(trial: &Trial, methods: &[Method], cfg: &DetectorConfig) -> Result<TrialAnalysis> {
    let trial = if trial.frame.is_normalized() { trial.clone() } else { normalize_coordinates(trial)? };
    let context = estimate_gait_context(&trial)?;
    let truth = events_from_grf(&trial, cfg)?;
    let detections = methods
        .iter()
        .map(|&m| (m, detect_method(m, &trial, &context, cfg).map_err(|e| e.to_string())))
        .collect();
    Ok(TrialAnalysis { trial_id: trial.id.clone(), context, truth, detections })
}

/// Trial CSV files directly inside `dir`, sorted by path. Events CSV files are skipped.
pub fn discover_trials(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if path.is_file() && name.ends_with(".csv") && !name.ends_with(EVENTS_SUFFIX) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// A trial that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedTrial {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    /// One row per method, then one per external source, in request order.
    pub rows: Vec<CompareRow>,
    pub trials: usize,
    pub skipped: Vec<SkippedTrial>,
}

struct TrialMatches {
    window: f64,
    /// Indexed like the comparison rows.
    matchings: Vec<Matching>,
}

fn process_trial(path: &Path, opts: &CompareOptions) -> Result<TrialMatches> {
    let trial: Trial = load_trial(path, &opts.load)?;
    let analysis = analyze_trial(&trial, &opts.methods, &opts.config)?;
    let truth = &analysis.truth.events;
    let window = default_window(truth);
    let mut matchings = Vec::with_capacity(opts.methods.len() + opts.externals.len());
    for (method, result) in &analysis.detections {
        let predicted: &[GaitEvent] = match result {
            Ok(r) => &r.events,
            Err(e) => {
                log::warn!("{}: {} failed: {e}", path.display(), method);
                &[]
            }
        };
        matchings.push(match_events(truth, predicted, window).with_trial(&analysis.trial_id));
    }
    for ext in &opts.externals {
        let file = ext.dir.join(format!("{}{EVENTS_SUFFIX}", analysis.trial_id));
        let predicted = load_events(&file).unwrap_or_else(|e| {
            log::warn!("{}: no predictions from {}: {e}", path.display(), ext.name);
            Vec::new()
        });
        matchings.push(match_events(truth, &predicted, window).with_trial(&analysis.trial_id));
    }
    Ok(TrialMatches { window, matchings })
}

/// Evaluates every trial in `dir` against its force-plate truth and pools the matches per method.
///
/// Unreadable or unanalyzable trials are skipped with a warning. Results do not depend on
/// `jobs`: trials are processed in sorted path order and merged in that order.
pub fn compare_directory(dir: &Path, opts: &CompareOptions) -> Result<CompareOutput> {
    let paths = discover_trials(dir)?;
    if paths.is_empty() {
        return Err(Error::Format(format!("{}: no trial CSV files", dir.display())));
    }
    let run = || paths.par_iter().map(|p| process_trial(p, opts)).collect::<Vec<_>>();
    let outcomes = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)
    } else {
        run()
    };

    let names: Vec<String> =
        opts.methods.iter().map(|m| m.id().to_string()).chain(opts.externals.iter().map(|e| e.name.clone())).collect();
    let mut pooled: Vec<Matching> = vec![Matching::default(); names.len()];
    let mut windows = Vec::new();
    let mut skipped = Vec::new();
    for (path, outcome) in paths.iter().zip(outcomes) {
        match outcome {
            Ok(t) => {
                windows.push(t.window);
                for (slot, m) in pooled.iter_mut().zip(t.matchings) {
                    slot.extend(m);
                }
            }
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                skipped.push(SkippedTrial { path: path.clone(), reason: e.to_string() });
            }
        }
    }
    let trials = windows.len();
    let window = median(&windows).unwrap_or(FALLBACK_WINDOW);
    let rows = names
        .into_iter()
        .zip(pooled)
        .map(|(name, m)| {
            let mut report: EvaluationReport = summarize(&name, &m, window, opts.bin_width_ms);
            report.trials = trials;
            report.skipped_trials = skipped.len();
            CompareRow { method: name, report }
        })
        .collect();
    Ok(CompareOutput { rows, trials, skipped })
}

/// Reports keyed by row name, for JSON export.
pub fn reports_by_name(rows: &[CompareRow]) -> BTreeMap<String, &EvaluationReport> {
    rows.iter().map(|r| (r.method.clone(), &r.report)).collect()
}
