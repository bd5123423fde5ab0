//! Canonical Trial CSV.
//!
//! ```text
//! # sample_rate_hz=200, units=mm
//! frame,LASIS_x,LASIS_y,LASIS_z,...,RFMT2_z,grf_left_z,grf_right_z
//! 0,102.5,55.0,1001.2,...
//! ```
//!
//! Empty cells are gaps. A marker sample is a gap if any of its three cells is empty.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{CoordinateFrame, MarkerTrajectory, SignedAxis, Trial, REQUIRED_MARKERS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const TRIAL_CSV_SCHEMA: u32 = 1;

const GRF_LEFT: &str = "grf_left_z";
const GRF_RIGHT: &str = "grf_right_z";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Millimeters,
    Meters,
}

impl LengthUnit {
    /// Divisor taking file values to meters.
    fn per_meter(self) -> f64 {
        match self {
            LengthUnit::Millimeters => 1e3,
            LengthUnit::Meters => 1.0,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "mm" => Some(LengthUnit::Millimeters),
            "m" => Some(LengthUnit::Meters),
            _ => None,
        }
    }
}

/// Hints applied while loading.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Overrides the `units=` header field.
    pub units: Option<LengthUnit>,
    /// Vertical axis of the file's coordinates (default +Z).
    pub vertical_axis: Option<SignedAxis>,
    /// Progression axis, if known; otherwise inferred during normalization.
    pub progression_axis: Option<SignedAxis>,
}

struct Header {
    sample_rate: f64,
    units: LengthUnit,
}

fn parse_header(line: &str) -> Result<Header> {
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::Format("line 1: expected '# sample_rate_hz=<f>, units=<mm|m>'".into()))?;
    let mut sample_rate = None;
    let mut units = LengthUnit::Millimeters;
    for field in body.split(',') {
        let Some((key, value)) = field.split_once('=') else { continue };
        match key.trim() {
            "sample_rate_hz" => {
                let v: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse { line: 1, message: format!("invalid sample rate '{}'", value.trim()) })?;
                sample_rate = Some(v);
            }
            "units" => {
                units = LengthUnit::parse(value)
                    .ok_or_else(|| Error::Parse { line: 1, message: format!("unknown units '{}'", value.trim()) })?;
            }
            _ => {}
        }
    }
    let sample_rate = sample_rate.ok_or_else(|| Error::Format("line 1: missing sample_rate_hz".into()))?;
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::Config(format!("sample rate must be > 0, got {sample_rate}")));
    }
    Ok(Header { sample_rate, units })
}

enum Column {
    Frame,
    Marker { name: String, axis: usize },
    Grf { left: bool },
}

fn classify(name: &str) -> Result<Column> {
    if name == "frame" {
        return Ok(Column::Frame);
    }
    if name == GRF_LEFT {
        return Ok(Column::Grf { left: true });
    }
    if name == GRF_RIGHT {
        return Ok(Column::Grf { left: false });
    }
    let axis = match name.rsplit_once('_') {
        Some((marker, "x")) if !marker.is_empty() => Some((marker, 0)),
        Some((marker, "y")) if !marker.is_empty() => Some((marker, 1)),
        Some((marker, "z")) if !marker.is_empty() => Some((marker, 2)),
        _ => None,
    };
    match axis {
        Some((marker, axis)) => Ok(Column::Marker { name: marker.to_string(), axis }),
        None => Err(Error::Format(format!("unrecognized column '{name}'"))),
    }
}

fn parse_cell(cell: &str, line: u64, column: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(Error::Parse { line, message: format!("column {column}: invalid number '{cell}'") }),
    }
}

/// Parses Trial CSV text.
pub fn read_trial<T: Scalar>(id: &str, text: &str, options: &LoadOptions) -> Result<Trial<T>> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let header = parse_header(first)?;
    let units = options.units.unwrap_or(header.units);
    let per_meter = units.per_meter();

    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(rest.as_bytes());
    let names: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 2, message: e.to_string() })?
        .iter()
        .map(str::to_string)
        .collect();
    let columns = names.iter().map(|n| classify(n)).collect::<Result<Vec<_>>>()?;

    // marker -> [column index per axis]
    let mut marker_cols: BTreeMap<String, [Option<usize>; 3]> = BTreeMap::new();
    let mut grf_cols = [None, None];
    for (i, c) in columns.iter().enumerate() {
        match c {
            Column::Frame => {}
            Column::Marker { name, axis } => {
                let slot = &mut marker_cols.entry(name.clone()).or_default()[*axis];
                if slot.is_some() {
                    return Err(Error::Format(format!("duplicate column '{}'", names[i])));
                }
                *slot = Some(i);
            }
            Column::Grf { left } => grf_cols[usize::from(!*left)] = Some(i),
        }
    }
    for m in REQUIRED_MARKERS {
        if !marker_cols.contains_key(m) {
            return Err(Error::MissingMarker(m.to_string()));
        }
    }
    let marker_cols: Vec<(String, [usize; 3])> = marker_cols
        .into_iter()
        .map(|(name, cols)| {
            let mut out = [0; 3];
            for (axis, c) in cols.iter().enumerate() {
                out[axis] = c.ok_or_else(|| Error::Format(format!("missing column: {name}_{}", ["x", "y", "z"][axis])))?;
            }
            Ok((name, out))
        })
        .collect::<Result<_>>()?;

    let mut samples: Vec<Vec<Option<[T; 3]>>> = vec![Vec::new(); marker_cols.len()];
    let mut grf: [Option<Vec<T>>; 2] = grf_cols.map(|c| c.map(|_| Vec::new()));
    for record in rdr.records() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { pos, expected_len, len } => Error::Parse {
                line: pos.as_ref().map_or(0, |p| p.line() + 1),
                message: format!("expected {expected_len} fields, found {len}"),
            },
            _ => Error::Parse { line: e.position().map_or(0, |p| p.line() + 1), message: e.to_string() },
        })?;
        let line = record.position().map_or(0, |p| p.line() + 1);
        for (k, (_, cols)) in marker_cols.iter().enumerate() {
            let mut p = [T::zero(); 3];
            let mut gap = false;
            for axis in 0..3 {
                match parse_cell(&record[cols[axis]], line, &names[cols[axis]])? {
                    Some(v) => p[axis] = T::lit(v / per_meter),
                    None => gap = true,
                }
            }
            samples[k].push(if gap { None } else { Some(p) });
        }
        for (side, col) in grf_cols.iter().enumerate() {
            if let Some(col) = col {
                let v = parse_cell(&record[*col], line, &names[*col])?
                    .ok_or_else(|| Error::Parse { line, message: format!("empty force value in {}", names[*col]) })?;
                grf[side].as_mut().expect("grf column").push(T::lit(v));
            }
        }
    }
    let markers = marker_cols.into_iter().zip(samples).map(|((name, _), s)| MarkerTrajectory::new(name, s));
    let frame = CoordinateFrame {
        progression_axis: options.progression_axis,
        vertical_axis: options.vertical_axis.unwrap_or(SignedAxis::PLUS_Z),
        units_converted: per_meter != 1.0,
    };
    let [grf_left, grf_right] = grf;
    Trial::new(id, header.sample_rate, markers, grf_left, grf_right, frame)
}

/// Loads a Trial CSV; the trial id is the file stem.
pub fn load_trial<T: Scalar>(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Trial<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("trial");
    read_trial(id, &text, options)
}

fn column_order<T: Scalar>(trial: &Trial<T>) -> Vec<&str> {
    let mut names: Vec<&str> = REQUIRED_MARKERS.iter().copied().filter(|m| trial.markers.contains_key(*m)).collect();
    names.extend(trial.markers.keys().map(String::as_str).filter(|m| !REQUIRED_MARKERS.contains(m)));
    names
}

/// Writes a trial in meters. Values use the shortest representation that parses back to the
/// identical value.
pub fn write_trial<T: Scalar, W: Write>(trial: &Trial<T>, mut out: W) -> std::io::Result<()> {
    let order = column_order(trial);
    writeln!(out, "# sample_rate_hz={}, units=m", trial.sample_rate)?;
    let mut header = vec!["frame".to_string()];
    for m in &order {
        header.extend(["x", "y", "z"].iter().map(|a| format!("{m}_{a}")));
    }
    if trial.grf_left.is_some() {
        header.push(GRF_LEFT.into());
    }
    if trial.grf_right.is_some() {
        header.push(GRF_RIGHT.into());
    }
    writeln!(out, "{}", header.join(","))?;
    let mut row = String::new();
    for i in 0..trial.frame_count() {
        row.clear();
        row.push_str(&i.to_string());
        for m in &order {
            match trial.markers[*m].samples[i] {
                Some(p) => {
                    for v in p {
                        row.push(',');
                        row.push_str(&v.as_f64().to_string());
                    }
                }
                None => row.push_str(",,,"),
            }
        }
        for ch in [&trial.grf_left, &trial.grf_right].into_iter().flatten() {
            row.push(',');
            row.push_str(&ch[i].as_f64().to_string());
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn save_trial<T: Scalar>(trial: &Trial<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_trial(trial, &mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}
