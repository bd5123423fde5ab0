//! Gait events, detection results and the Events CSV format.
//!
//! Events CSV layout, one event per row, sorted by time:
//!
//! ```text
//! side,kind,frame,time_s,source
//! L,HS,40,0.2,zeni
//! ```

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version of the Events CSV layout.
pub const EVENTS_CSV_SCHEMA: u32 = 1;

/// Source tag used for force-plate reference events.
pub const GRF_TRUTH_SOURCE: &str = "grf_truth";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// Marker label prefix, `L` or `R`.
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l" | "left" => Ok(Side::Left),
            "r" | "right" => Ok(Side::Right),
            other => Err(Error::Format(format!("invalid side '{other}' (expected L or R)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// Heel strike, start of stance.
    #[serde(rename = "HS")]
    HeelStrike,
    /// Toe off, start of swing.
    #[serde(rename = "TO")]
    ToeOff,
}

impl EventKind {
    pub const BOTH: [EventKind; 2] = [EventKind::HeelStrike, EventKind::ToeOff];

    pub fn code(self) -> &'static str {
        match self {
            EventKind::HeelStrike => "HS",
            EventKind::ToeOff => "TO",
        }
    }

    pub fn opposite(self) -> EventKind {
        match self {
            EventKind::HeelStrike => EventKind::ToeOff,
            EventKind::ToeOff => EventKind::HeelStrike,
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HS" => Ok(EventKind::HeelStrike),
            "TO" => Ok(EventKind::ToeOff),
            other => Err(Error::Format(format!("invalid event kind '{other}' (expected HS or TO)"))),
        }
    }
}

/// One detected or reference event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitEvent {
    pub side: Side,
    pub kind: EventKind,
    /// Frame index in the trial.
    pub frame: usize,
    /// Seconds from trial start. Equals `frame / sample_rate` unless sub-frame refinement is on.
    pub time: f64,
    pub source: String,
}

impl GaitEvent {
    pub fn at_frame(side: Side, kind: EventKind, frame: usize, sample_rate: f64, source: &str) -> Self {
        GaitEvent { side, kind, frame, time: frame as f64 / sample_rate, source: source.to_string() }
    }
}

/// Why an event or a side carries a diagnostic note.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum DiagnosticFlag {
    /// The detector produced no events of this kind on this side.
    NoEvents { side: Side, kind: EventKind },
    /// Events overlapping an unfilled marker gap were dropped.
    GapInvalidated { side: Side, start: usize, end: usize, dropped: usize },
    /// A refinement stage found no qualifying frame and kept its seed event.
    Fallback { side: Side, kind: EventKind, frame: usize },
}

/// Per-event detail, parallel to [`DetectionResult::events`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDiagnostic {
    /// Detector-specific candidate strength (extremum prominence, or 0 for threshold rules).
    pub score: f64,
    pub fallback: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub per_event: Vec<EventDiagnostic>,
    pub flags: Vec<DiagnosticFlag>,
    /// Number of raw candidates removed by separation, alternation or strength pruning.
    pub pruned_candidates: usize,
}

/// Output of one detector (or of force-plate truth extraction) on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub method: String,
    /// Sorted by (time, side, kind).
    pub events: Vec<GaitEvent>,
    pub diagnostics: Diagnostics,
}

impl DetectionResult {
    /// Builds a result from events lacking per-event diagnostics.
    pub fn from_events(method: impl Into<String>, mut events: Vec<GaitEvent>) -> Self {
        sort_events(&mut events);
        let per_event = events.iter().map(|_| EventDiagnostic { score: 0.0, fallback: false }).collect();
        DetectionResult {
            method: method.into(),
            events,
            diagnostics: Diagnostics { per_event, ..Diagnostics::default() },
        }
    }

    pub fn events_of(&self, side: Side, kind: EventKind) -> impl Iterator<Item = &GaitEvent> {
        self.events.iter().filter(move |e| e.side == side && e.kind == kind)
    }

    pub fn count(&self, side: Side, kind: EventKind) -> usize {
        self.events_of(side, kind).count()
    }

    /// Median interval between consecutive heel strikes of the same side, in seconds.
    pub fn median_gait_period(&self) -> Option<f64> {
        let mut intervals = Vec::new();
        for side in Side::BOTH {
            let times: Vec<f64> = self.events_of(side, EventKind::HeelStrike).map(|e| e.time).collect();
            intervals.extend(times.windows(2).map(|w| w[1] - w[0]));
        }
        crate::scalar::median(&intervals)
    }
}

pub(crate) fn event_order(a: &GaitEvent, b: &GaitEvent) -> std::cmp::Ordering {
    a.time
        .partial_cmp(&b.time)
        .expect("finite event times")
        .then(a.side.cmp(&b.side))
        .then(a.kind.cmp(&b.kind))
}

pub(crate) fn sort_events(events: &mut [GaitEvent]) {
    events.sort_by(event_order);
}

#[derive(Debug, Serialize, Deserialize)]
struct EventRow {
    side: String,
    kind: String,
    frame: i64,
    time_s: f64,
    source: String,
}

/// Parses and validates an Events CSV.
///
/// Validation: exact header, known side/kind codes, non-negative frame, finite non-negative time.
/// Rows are returned sorted by time.
pub fn read_events<R: Read>(reader: R) -> Result<Vec<GaitEvent>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Format(format!("events csv: {e}")))?
        .clone();
    let expected = ["side", "kind", "frame", "time_s", "source"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Format(format!(
            "events csv header must be '{}', found '{}'",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut events = Vec::new();
    for (i, row) in rdr.deserialize::<EventRow>().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::Parse { line, message: e.to_string() })?;
        let side = row.side.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?;
        let kind = row.kind.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?;
        if row.frame < 0 {
            return Err(Error::Parse { line, message: format!("negative frame {}", row.frame) });
        }
        if !row.time_s.is_finite() || row.time_s < 0.0 {
            return Err(Error::Parse { line, message: format!("invalid time {}", row.time_s) });
        }
        events.push(GaitEvent { side, kind, frame: row.frame as usize, time: row.time_s, source: row.source });
    }
    sort_events(&mut events);
    Ok(events)
}

pub fn write_events<W: Write>(writer: W, events: &[GaitEvent]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| Error::Format(format!("events csv: {e}"));
    wtr.write_record(["side", "kind", "frame", "time_s", "source"]).map_err(to_err)?;
    for e in events {
        wtr.write_record([
            e.side.prefix().to_string(),
            e.kind.code().to_string(),
            e.frame.to_string(),
            e.time.to_string(),
            e.source.clone(),
        ])
        .map_err(to_err)?;
    }
    wtr.flush().map_err(|e| Error::Format(format!("events csv: {e}")))?;
    Ok(())
}

pub fn load_events(path: impl AsRef<Path>) -> Result<Vec<GaitEvent>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_events(file).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        Error::Parse { line, message } => Error::Format(format!("{}: line {line}: {message}", path.display())),
        other => other,
    })
}

pub fn save_events(path: impl AsRef<Path>, events: &[GaitEvent]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_events(std::io::BufWriter::new(file), events)
}
