//! Matching of predicted to reference events and temporal-error statistics.

mod export;
mod table;

use serde::{Deserialize, Serialize};

use crate::events::{EventKind, GaitEvent, Side};
use crate::scalar::median;

pub use export::{export_report, import_report, load_report, write_deltas_csv, write_report_json, ReportFormat};
pub use table::{display_name, format_compare_table, CompareRow};

/// Version of the report JSON layout.
pub const REPORT_SCHEMA: u32 = 1;
/// Default histogram bin width, ms (one frame at 200 Hz).
pub const DEFAULT_BIN_WIDTH_MS: f64 = 5.0;
/// Matching window as a fraction of the reference gait period.
pub const WINDOW_PERIOD_FRACTION: f64 = 0.5;
/// Matching window when the reference events give no interval at all, seconds.
pub const FALLBACK_WINDOW: f64 = 0.5;

/// A predicted event paired with its reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    /// Trial the pair came from; empty when matching a single trial.
    #[serde(default)]
    pub trial: String,
    pub truth: GaitEvent,
    pub predicted: GaitEvent,
    /// `predicted.time - truth.time`, seconds; positive means late.
    pub delta: f64,
}

/// Outcome of matching one trial (or several, concatenated).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
    /// Reference events without a prediction.
    pub missed: Vec<GaitEvent>,
    /// Predictions without a reference event.
    pub spurious: Vec<GaitEvent>,
}

impl Matching {
    /// Labels every pair with `trial`.
    pub fn with_trial(mut self, trial: &str) -> Self {
        for p in &mut self.pairs {
            p.trial = trial.to_string();
        }
        self
    }

    pub fn extend(&mut self, other: Matching) {
        self.pairs.extend(other.pairs);
        self.missed.extend(other.missed);
        self.spurious.extend(other.spurious);
    }
}

/// Default matching window: half the median reference gait period; failing that, half the
/// median interval between consecutive same-side same-kind events; failing that,
/// [`FALLBACK_WINDOW`].
pub fn default_window(truth: &[GaitEvent]) -> f64 {
    let mut hs_intervals = Vec::new();
    let mut any_intervals = Vec::new();
    for side in Side::BOTH {
        for kind in EventKind::BOTH {
            let times: Vec<f64> = truth.iter().filter(|e| e.side == side && e.kind == kind).map(|e| e.time).collect();
            let iv = times.windows(2).map(|w| w[1] - w[0]);
            if kind == EventKind::HeelStrike {
                hs_intervals.extend(iv.clone());
            }
            any_intervals.extend(iv);
        }
    }
    median(&hs_intervals)
        .or_else(|| median(&any_intervals))
        .map_or(FALLBACK_WINDOW, |p| WINDOW_PERIOD_FRACTION * p)
}

/// One-to-one greedy matching of same-side, same-kind events within `window` seconds.
///
/// Candidate pairs are accepted in order of increasing `|delta|`; ties go to the pair with the
/// smaller time sum, then to earlier reference and predicted events.
pub fn match_events(truth: &[GaitEvent], predicted: &[GaitEvent], window: f64) -> Matching {
    let tolerance = window + 1e-9;
    let mut result = Matching::default();
    for side in Side::BOTH {
        for kind in EventKind::BOTH {
            let t: Vec<&GaitEvent> = truth.iter().filter(|e| e.side == side && e.kind == kind).collect();
            let p: Vec<&GaitEvent> = predicted.iter().filter(|e| e.side == side && e.kind == kind).collect();
            let mut candidates: Vec<(f64, f64, usize, usize)> = Vec::new();
            for (i, te) in t.iter().enumerate() {
                for (j, pe) in p.iter().enumerate() {
                    let d = (pe.time - te.time).abs();
                    if d <= tolerance {
                        candidates.push((d, pe.time + te.time, i, j));
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
            let mut t_used = vec![false; t.len()];
            let mut p_used = vec![false; p.len()];
            for (_, _, i, j) in candidates {
                if t_used[i] || p_used[j] {
                    continue;
                }
                t_used[i] = true;
                p_used[j] = true;
                result.pairs.push(MatchedPair {
                    trial: String::new(),
                    truth: t[i].clone(),
                    predicted: p[j].clone(),
                    delta: p[j].time - t[i].time,
                });
            }
            result.missed.extend(t.iter().zip(&t_used).filter(|(_, u)| !**u).map(|(e, _)| (*e).clone()));
            result.spurious.extend(p.iter().zip(&p_used).filter(|(_, u)| !**u).map(|(e, _)| (*e).clone()));
        }
    }
    result.pairs.sort_by(|a, b| a.truth.time.total_cmp(&b.truth.time).then(a.truth.side.cmp(&b.truth.side)).then(a.truth.kind.cmp(&b.truth.kind)));
    result
}

/// Delta histogram with bins centred on multiples of the bin width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width_ms: f64,
    /// `counts.len() + 1` edges, ms; empty when there are no deltas.
    pub edges_ms: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn from_deltas_ms(deltas_ms: &[f64], bin_width_ms: f64) -> Self {
        let bins: Vec<i64> = deltas_ms.iter().map(|d| (d / bin_width_ms).round() as i64).collect();
        let (Some(&lo), Some(&hi)) = (bins.iter().min(), bins.iter().max()) else {
            return Histogram { bin_width_ms, edges_ms: Vec::new(), counts: Vec::new() };
        };
        let mut counts = vec![0; (hi - lo + 1) as usize];
        for b in bins {
            counts[(b - lo) as usize] += 1;
        }
        let edges_ms = (lo..=hi + 1).map(|k| (k as f64 - 0.5) * bin_width_ms).collect();
        Histogram { bin_width_ms, edges_ms, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Statistics for one event kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub n_matched: usize,
    pub n_missed: usize,
    pub n_spurious: usize,
    /// Mean delta, ms; `None` without matched pairs.
    pub mean_ms: Option<f64>,
    /// Sample standard deviation (n - 1) of delta, ms; `None` below two pairs.
    pub std_ms: Option<f64>,
    pub mean_abs_ms: Option<f64>,
    /// `n_matched / (n_matched + n_missed)`; `None` without reference events.
    pub detection_rate: Option<f64>,
    pub histogram: Histogram,
}

/// Counts for one side and kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideKindCounts {
    pub side: Side,
    pub kind: EventKind,
    pub n_matched: usize,
    pub n_missed: usize,
    pub n_spurious: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema: u32,
    pub method: String,
    /// Matching window used, seconds.
    pub window_s: f64,
    pub heel_strike: KindSummary,
    pub toe_off: KindSummary,
    pub counts: Vec<SideKindCounts>,
    /// Trials that contributed to the report.
    pub trials: usize,
    /// Trials that could not be processed.
    pub skipped_trials: usize,
    pub pairs: Vec<MatchedPair>,
    pub missed: Vec<GaitEvent>,
    pub spurious: Vec<GaitEvent>,
}

impl EvaluationReport {
    pub fn kind(&self, kind: EventKind) -> &KindSummary {
        match kind {
            EventKind::HeelStrike => &self.heel_strike,
            EventKind::ToeOff => &self.toe_off,
        }
    }

    pub fn n_matched(&self) -> usize {
        self.pairs.len()
    }
}

/// Mean and sample standard deviation; summation runs over sorted values so the result does
/// not depend on input order.
fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (Some(mean), None);
    }
    let mut sq: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    sq.sort_by(f64::total_cmp);
    (Some(mean), Some((sq.iter().sum::<f64>() / (n - 1.0)).sqrt()))
}

fn kind_summary(m: &Matching, kind: EventKind, bin_width_ms: f64) -> KindSummary {
    let deltas_ms: Vec<f64> = m.pairs.iter().filter(|p| p.truth.kind == kind).map(|p| p.delta * 1e3).collect();
    let n_missed = m.missed.iter().filter(|e| e.kind == kind).count();
    let n_spurious = m.spurious.iter().filter(|e| e.kind == kind).count();
    let (mean_ms, std_ms) = mean_std(&deltas_ms);
    let abs: Vec<f64> = deltas_ms.iter().map(|d| d.abs()).collect();
    let n_matched = deltas_ms.len();
    KindSummary {
        n_matched,
        n_missed,
        n_spurious,
        mean_ms,
        std_ms,
        mean_abs_ms: mean_std(&abs).0,
        detection_rate: (n_matched + n_missed > 0).then(|| n_matched as f64 / (n_matched + n_missed) as f64),
        histogram: Histogram::from_deltas_ms(&deltas_ms, bin_width_ms),
    }
}

/// Per-kind statistics, per side/kind counts and histograms of a (possibly pooled) matching.
pub fn summarize(method: &str, matching: &Matching, window: f64, bin_width_ms: f64) -> EvaluationReport {
    let mut counts = Vec::new();
    for side in Side::BOTH {
        for kind in EventKind::BOTH {
            let of = |e: &GaitEvent| e.side == side && e.kind == kind;
            counts.push(SideKindCounts {
                side,
                kind,
                n_matched: matching.pairs.iter().filter(|p| of(&p.truth)).count(),
                n_missed: matching.missed.iter().filter(|e| of(e)).count(),
                n_spurious: matching.spurious.iter().filter(|e| of(e)).count(),
            });
        }
    }
    EvaluationReport {
        schema: REPORT_SCHEMA,
        method: method.to_string(),
        window_s: window,
        heel_strike: kind_summary(matching, EventKind::HeelStrike, bin_width_ms),
        toe_off: kind_summary(matching, EventKind::ToeOff, bin_width_ms),
        counts,
        trials: 1,
        skipped_trials: 0,
        pairs: matching.pairs.clone(),
        missed: matching.missed.clone(),
        spurious: matching.spurious.clone(),
    }
}

/// Matches with the default window and summarizes with the default bin width.
pub fn evaluate(method: &str, truth: &[GaitEvent], predicted: &[GaitEvent]) -> EvaluationReport {
    let window = default_window(truth);
    summarize(method, &match_events(truth, predicted, window), window, DEFAULT_BIN_WIDTH_MS)
}
