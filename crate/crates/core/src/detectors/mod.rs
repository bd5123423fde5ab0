//! Kinematic heel-strike and toe-off detectors.
//!
//! Every detector works on a normalized trial (progression +X, vertical +Z) and treats the two
//! sides independently. Marker positions are gap-repaired and lowpass-filtered first; raw
//! candidates then pass through the same pruning pipeline: minimum same-kind separation,
//! a relative strength gate for extremum criteria, HS/TO alternation, and removal of events near
//! unrepaired marker gaps.

mod bonci;
mod desailly;
mod ghoussayni;
mod hreljac;
mod hsue;
mod oconnor;
mod prep;
mod zeni;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::DetectorConfig;
use crate::error::{Error, Result};
use crate::events::{event_order, DetectionResult, DiagnosticFlag, Diagnostics, EventDiagnostic, EventKind, GaitEvent, Side};
use crate::scalar::{quantile_sorted, Scalar};
use crate::signal::{adaptive_prominence, find_extrema, ExtremumKind, GaitContext};
use crate::trial::{GapSpan, Trial};

pub use bonci::detect_bonci;
pub use desailly::detect_desailly;
pub use ghoussayni::detect_ghoussayni;
pub use hreljac::detect_hreljac;
pub use hsue::detect_hsue;
pub use oconnor::detect_oconnor;
pub use zeni::detect_zeni;

/// Stable method identifiers, in reporting order.
pub const METHOD_IDS: [&str; 7] = ["zeni", "desailly", "oconnor", "ghoussayni", "hreljac", "hsue", "bonci"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Zeni,
    Desailly,
    #[serde(rename = "oconnor")]
    OConnor,
    Ghoussayni,
    Hreljac,
    Hsue,
    Bonci,
}

impl Method {
    pub const ALL: [Method; 7] =
        [Method::Zeni, Method::Desailly, Method::OConnor, Method::Ghoussayni, Method::Hreljac, Method::Hsue, Method::Bonci];

    pub fn id(self) -> &'static str {
        METHOD_IDS[self as usize]
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Case-insensitive lookup by identifier.
    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.id() == wanted)
            .ok_or_else(|| Error::UnknownMethod { name: s.to_string(), valid: METHOD_IDS.to_vec() })
    }
}

/// Runs the detector named `method` (case-insensitive).
pub fn detect<T: Scalar>(method: &str, trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    detect_method(method.parse()?, trial, ctx, cfg)
}

pub fn detect_method<T: Scalar>(method: Method, trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    match method {
        Method::Zeni => detect_zeni(trial, ctx, cfg),
        Method::Desailly => detect_desailly(trial, ctx, cfg),
        Method::OConnor => detect_oconnor(trial, ctx, cfg),
        Method::Ghoussayni => detect_ghoussayni(trial, ctx, cfg),
        Method::Hreljac => detect_hreljac(trial, ctx, cfg),
        Method::Hsue => detect_hsue(trial, ctx, cfg),
        Method::Bonci => detect_bonci(trial, ctx, cfg),
    }
}

/// Quantile of same-kind candidate scores the strength gate is relative to.
const GATE_REFERENCE_QUANTILE: f64 = 0.75;

/// One raw event candidate on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Candidate {
    pub frame: usize,
    /// Sub-frame position relative to `frame`, in frames.
    pub offset: f64,
    /// Preference when two candidates compete; higher wins.
    pub rank: f64,
    /// Strength reported in diagnostics and used by the relative gate.
    pub score: f64,
    pub fallback: bool,
}

impl Candidate {
    /// A threshold-rule candidate: earlier frames win.
    pub fn earliest(frame: usize) -> Self {
        Candidate { frame, offset: 0.0, rank: -(frame as f64), score: 0.0, fallback: false }
    }
}

/// How competing candidates are judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ranking {
    /// Extremum criteria: the more extreme candidate wins and weak extrema are gated.
    Extremum,
    /// Threshold criteria: the earliest candidate wins, no strength gate.
    Earliest,
}

pub(crate) struct SideCandidates {
    pub side: Side,
    pub hs: Vec<Candidate>,
    pub to: Vec<Candidate>,
    pub gaps: Vec<GapSpan>,
}

/// Strict extrema of `values` as candidates, using the configured or adaptive prominence.
pub(crate) fn extremum_candidates<T: Scalar>(values: &[T], kind: ExtremumKind, cfg: &DetectorConfig) -> Vec<Candidate> {
    let prominence = cfg.extrema_prominence.map(T::lit).unwrap_or_else(|| adaptive_prominence(values));
    find_extrema(values, kind, 1, prominence)
        .into_iter()
        .map(|e| {
            let v = e.value.as_f64();
            let offset = if cfg.subframe_refinement { parabolic_offset(values, e.index) } else { 0.0 };
            Candidate {
                frame: e.index,
                offset,
                rank: if kind == ExtremumKind::Max { v } else { -v },
                score: e.prominence.as_f64(),
                fallback: false,
            }
        })
        .collect()
}

/// Vertex of the parabola through `values[i - 1..=i + 1]`, relative to `i`, clamped to half a frame.
fn parabolic_offset<T: Scalar>(values: &[T], i: usize) -> f64 {
    if i == 0 || i + 1 >= values.len() {
        return 0.0;
    }
    let (y0, y1, y2) = (values[i - 1].as_f64(), values[i].as_f64(), values[i + 1].as_f64());
    let curvature = y0 - 2.0 * y1 + y2;
    if curvature == 0.0 {
        return 0.0;
    }
    (0.5 * (y0 - y2) / curvature).clamp(-0.5, 0.5)
}

/// Minimum frame distance between same-kind events.
pub(crate) fn separation_frames(ctx: &GaitContext, cfg: &DetectorConfig, sample_rate: f64) -> usize {
    ((cfg.min_event_separation_frac * ctx.gait_period * sample_rate - 1e-9).ceil() as usize).max(1)
}

/// Greedy separation: best-ranked first, dropping any candidate closer than `min_frames`.
fn enforce_separation(mut c: Vec<Candidate>, min_frames: usize) -> Vec<Candidate> {
    c.sort_by(|a, b| b.rank.total_cmp(&a.rank).then(a.frame.cmp(&b.frame)));
    let mut kept: Vec<Candidate> = Vec::with_capacity(c.len());
    for cand in c {
        if kept.iter().all(|k| k.frame.abs_diff(cand.frame) >= min_frames) {
            kept.push(cand);
        }
    }
    kept.sort_by_key(|k| k.frame);
    kept
}

/// Drops candidates whose score is below `gate` times the upper-quartile score.
fn strength_gate(c: Vec<Candidate>, gate: f64) -> Vec<Candidate> {
    if c.is_empty() {
        return c;
    }
    let mut scores: Vec<f64> = c.iter().map(|k| k.score).collect();
    scores.sort_by(f64::total_cmp);
    let reference = quantile_sorted(&scores, GATE_REFERENCE_QUANTILE);
    c.into_iter().filter(|k| k.score >= gate * reference).collect()
}

/// Collapses runs of same-kind candidates in time order to the best-ranked member.
fn enforce_alternation(hs: Vec<Candidate>, to: Vec<Candidate>) -> (Vec<Candidate>, Vec<Candidate>) {
    let mut merged: Vec<(EventKind, Candidate)> =
        hs.into_iter().map(|c| (EventKind::HeelStrike, c)).chain(to.into_iter().map(|c| (EventKind::ToeOff, c))).collect();
    merged.sort_by_key(|(kind, c)| (c.frame, *kind));
    let mut out: Vec<(EventKind, Candidate)> = Vec::with_capacity(merged.len());
    for (kind, c) in merged {
        match out.last_mut() {
            Some(last) if last.0 == kind => {
                if c.rank > last.1.rank {
                    last.1 = c;
                }
            }
            _ => out.push((kind, c)),
        }
    }
    let (mut hs, mut to) = (Vec::new(), Vec::new());
    for (kind, c) in out {
        match kind {
            EventKind::HeelStrike => hs.push(c),
            EventKind::ToeOff => to.push(c),
        }
    }
    (hs, to)
}

/// Applies the shared pruning pipeline and assembles the result.
pub(crate) fn finalize(
    method: &str,
    sides: Vec<SideCandidates>,
    ranking: Ranking,
    ctx: &GaitContext,
    cfg: &DetectorConfig,
    sample_rate: f64,
) -> DetectionResult {
    let min_frames = separation_frames(ctx, cfg, sample_rate);
    let gap_margin = 0.5 * ctx.gait_period * sample_rate;
    let mut rows: Vec<(GaitEvent, EventDiagnostic)> = Vec::new();
    let mut diagnostics = Diagnostics::default();

    for sc in sides {
        let raw = sc.hs.len() + sc.to.len();
        let mut hs = enforce_separation(sc.hs, min_frames);
        let mut to = enforce_separation(sc.to, min_frames);
        if ranking == Ranking::Extremum && cfg.relative_prominence_gate > 0.0 {
            hs = strength_gate(hs, cfg.relative_prominence_gate);
            to = strength_gate(to, cfg.relative_prominence_gate);
        }
        let (hs, to) = enforce_alternation(hs, to);

        let mut events: Vec<(EventKind, Candidate)> =
            hs.into_iter().map(|c| (EventKind::HeelStrike, c)).chain(to.into_iter().map(|c| (EventKind::ToeOff, c))).collect();
        let survived = events.len();
        for gap in &sc.gaps {
            let near = |c: &Candidate| {
                let f = c.frame as f64;
                f + gap_margin >= gap.start as f64 && f < gap.end as f64 + gap_margin
            };
            let before = events.len();
            events.retain(|(_, c)| !near(c));
            diagnostics.flags.push(DiagnosticFlag::GapInvalidated {
                side: sc.side,
                start: gap.start,
                end: gap.end,
                dropped: before - events.len(),
            });
        }
        diagnostics.pruned_candidates += raw - survived;

        for kind in EventKind::BOTH {
            if !events.iter().any(|(k, _)| *k == kind) {
                diagnostics.flags.push(DiagnosticFlag::NoEvents { side: sc.side, kind });
            }
        }
        for (kind, c) in events {
            let mut event = GaitEvent::at_frame(sc.side, kind, c.frame, sample_rate, method);
            if cfg.subframe_refinement {
                event.time = ((c.frame as f64 + c.offset) / sample_rate).max(0.0);
            }
            if c.fallback {
                diagnostics.flags.push(DiagnosticFlag::Fallback { side: sc.side, kind, frame: c.frame });
            }
            rows.push((event, EventDiagnostic { score: c.score, fallback: c.fallback }));
        }
    }

    rows.sort_by(|a, b| event_order(&a.0, &b.0));
    let (events, per_event) = rows.into_iter().unzip();
    diagnostics.per_event = per_event;
    DetectionResult { method: method.to_string(), events, diagnostics }
}
