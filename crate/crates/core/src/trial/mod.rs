//! Trial data model: marker trajectories, force channels and the coordinate frame they live in.

mod csv_io;
mod gaps;
mod normalize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::Side;
use crate::scalar::{Scalar, Vec3};

pub use csv_io::{load_trial, read_trial, save_trial, write_trial, LengthUnit, LoadOptions, TRIAL_CSV_SCHEMA};
pub use gaps::{fill_gaps, GapFill, GapReason, GapSpan};
pub(crate) use gaps::bridge_all;
pub use normalize::{normalize_coordinates, MIN_PROGRESSION_DISPLACEMENT};

pub const LASIS: &str = "LASIS";
pub const LPSIS: &str = "LPSIS";
pub const RASIS: &str = "RASIS";
pub const RPSIS: &str = "RPSIS";
pub const LFCC: &str = "LFCC";
pub const RFCC: &str = "RFCC";
pub const LFMT2: &str = "LFMT2";
pub const RFMT2: &str = "RFMT2";

pub const PELVIS_MARKERS: [&str; 4] = [LASIS, LPSIS, RASIS, RPSIS];

/// Markers every trial file must carry, in canonical column order.
pub const REQUIRED_MARKERS: [&str; 8] = [LASIS, LPSIS, RASIS, RPSIS, LFCC, RFCC, LFMT2, RFMT2];

pub const DEFAULT_SAMPLE_RATE: f64 = 200.0;

/// Heel (calcaneus) marker label for a side.
pub fn heel_marker(side: Side) -> &'static str {
    match side {
        Side::Left => LFCC,
        Side::Right => RFCC,
    }
}

/// Second metatarsal head (toe) marker label for a side.
pub fn toe_marker(side: Side) -> &'static str {
    match side {
        Side::Left => LFMT2,
        Side::Right => RFMT2,
    }
}

/// Label with its side prefix swapped (`LFCC` <-> `RFCC`); labels without a side are unchanged.
pub fn mirrored_label(label: &str) -> String {
    match label.as_bytes().first() {
        Some(b'L') => format!("R{}", &label[1..]),
        Some(b'R') => format!("L{}", &label[1..]),
        _ => label.to_string(),
    }
}

/// A named marker path, one optional 3-vector (meters) per frame; `None` is a gap.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerTrajectory<T: Scalar = f64> {
    pub name: String,
    pub samples: Vec<Option<Vec3<T>>>,
}

impl<T: Scalar> MarkerTrajectory<T> {
    pub fn new(name: impl Into<String>, samples: Vec<Option<Vec3<T>>>) -> Self {
        MarkerTrajectory { name: name.into(), samples }
    }

    pub fn from_points(name: impl Into<String>, points: impl IntoIterator<Item = Vec3<T>>) -> Self {
        Self::new(name, points.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn gap_count(&self) -> usize {
        self.samples.iter().filter(|s| s.is_none()).count()
    }

    /// One coordinate as a dense vector; `None` if any frame is a gap.
    pub fn axis(&self, axis: usize) -> Option<Vec<T>> {
        self.samples.iter().map(|s| s.map(|p| p[axis])).collect()
    }

    fn check_finite(&self) -> Result<()> {
        for (i, s) in self.samples.iter().enumerate() {
            if let Some(p) = s {
                if p.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Format(format!("marker {} has a non-finite sample at frame {i}", self.name)));
                }
            }
        }
        Ok(())
    }
}

/// One coordinate axis with a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedAxis {
    /// 0 = X, 1 = Y, 2 = Z.
    pub index: usize,
    pub positive: bool,
}

impl SignedAxis {
    pub const PLUS_X: SignedAxis = SignedAxis { index: 0, positive: true };
    pub const PLUS_Y: SignedAxis = SignedAxis { index: 1, positive: true };
    pub const PLUS_Z: SignedAxis = SignedAxis { index: 2, positive: true };

    pub fn new(index: usize, positive: bool) -> Result<Self> {
        if index > 2 {
            return Err(Error::Config(format!("axis index {index} out of range 0..=2")));
        }
        Ok(SignedAxis { index, positive })
    }
}

/// Where progression and vertical point in the stored coordinates.
///
/// `progression_axis` is unknown until [`normalize_coordinates`] has inspected the pelvis path,
/// after which it is `+X` and `vertical_axis` is `+Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateFrame {
    pub progression_axis: Option<SignedAxis>,
    pub vertical_axis: SignedAxis,
    /// Coordinates were rescaled to meters on load.
    pub units_converted: bool,
}

impl CoordinateFrame {
    pub const NORMALIZED: CoordinateFrame = CoordinateFrame {
        progression_axis: Some(SignedAxis::PLUS_X),
        vertical_axis: SignedAxis::PLUS_Z,
        units_converted: false,
    };

    pub fn is_normalized(&self) -> bool {
        self.progression_axis == Some(SignedAxis::PLUS_X) && self.vertical_axis == SignedAxis::PLUS_Z
    }
}

impl Default for CoordinateFrame {
    fn default() -> Self {
        CoordinateFrame { progression_axis: None, vertical_axis: SignedAxis::PLUS_Z, units_converted: false }
    }
}

/// Time-aligned marker trajectories plus optional vertical force per side.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial<T: Scalar = f64> {
    pub id: String,
    pub sample_rate: f64,
    pub markers: BTreeMap<String, MarkerTrajectory<T>>,
    /// Vertical ground reaction force under the left foot, newtons.
    pub grf_left: Option<Vec<T>>,
    pub grf_right: Option<Vec<T>>,
    pub frame: CoordinateFrame,
}

impl<T: Scalar> Trial<T> {
    /// Assembles and validates a trial: positive rate, at least two frames, equal lengths,
    /// finite samples.
    pub fn new(
        id: impl Into<String>,
        sample_rate: f64,
        markers: impl IntoIterator<Item = MarkerTrajectory<T>>,
        grf_left: Option<Vec<T>>,
        grf_right: Option<Vec<T>>,
        frame: CoordinateFrame,
    ) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Config(format!("sample rate must be > 0, got {sample_rate}")));
        }
        let markers: BTreeMap<_, _> = markers.into_iter().map(|m| (m.name.clone(), m)).collect();
        let n = markers
            .values()
            .map(|m| m.len())
            .chain(grf_left.iter().map(Vec::len))
            .chain(grf_right.iter().map(Vec::len))
            .next()
            .ok_or_else(|| Error::Format("trial has no channels".into()))?;
        if n < 2 {
            return Err(Error::Format(format!("trial needs at least 2 frames, got {n}")));
        }
        for m in markers.values() {
            if m.len() != n {
                return Err(Error::Format(format!("marker {} has {} frames, expected {n}", m.name, m.len())));
            }
            m.check_finite()?;
        }
        for (label, ch) in [("grf_left_z", &grf_left), ("grf_right_z", &grf_right)] {
            if let Some(ch) = ch {
                if ch.len() != n {
                    return Err(Error::Format(format!("{label} has {} frames, expected {n}", ch.len())));
                }
                if ch.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Format(format!("{label} has non-finite samples")));
                }
            }
        }
        Ok(Trial { id: id.into(), sample_rate, markers, grf_left, grf_right, frame })
    }

    pub fn frame_count(&self) -> usize {
        self.markers
            .values()
            .map(|m| m.len())
            .chain(self.grf_left.iter().map(Vec::len))
            .chain(self.grf_right.iter().map(Vec::len))
            .next()
            .unwrap_or(0)
    }

    pub fn duration(&self) -> f64 {
        self.frame_count() as f64 / self.sample_rate
    }

    pub fn marker(&self, name: &str) -> Result<&MarkerTrajectory<T>> {
        self.markers.get(name).ok_or_else(|| Error::MissingMarker(name.to_string()))
    }

    pub fn grf(&self, side: Side) -> Option<&[T]> {
        match side {
            Side::Left => self.grf_left.as_deref(),
            Side::Right => self.grf_right.as_deref(),
        }
    }

    /// Applies `f` to every non-gap marker sample.
    pub fn map_points(&self, mut f: impl FnMut(Vec3<T>) -> Vec3<T>) -> Self {
        let mut out = self.clone();
        for m in out.markers.values_mut() {
            for s in m.samples.iter_mut().flatten() {
                *s = f(*s);
            }
        }
        out
    }

    /// Adds a constant offset to every marker sample.
    pub fn translated(&self, offset: Vec3<T>) -> Self {
        self.map_points(|p| [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]])
    }

    /// Swaps every left/right marker pair and the two force channels.
    pub fn mirrored(&self) -> Self {
        let markers = self
            .markers
            .values()
            .map(|m| {
                let name = mirrored_label(&m.name);
                (name.clone(), MarkerTrajectory { name, samples: m.samples.clone() })
            })
            .collect();
        Trial {
            markers,
            grf_left: self.grf_right.clone(),
            grf_right: self.grf_left.clone(),
            ..self.clone()
        }
    }

    /// Prepends `k` copies of the first frame (a static pose), on markers and force channels.
    pub fn with_static_prefix(&self, k: usize) -> Self {
        let mut out = self.clone();
        for m in out.markers.values_mut() {
            let first = m.samples[0];
            m.samples.splice(0..0, std::iter::repeat_n(first, k));
        }
        for ch in [&mut out.grf_left, &mut out.grf_right].into_iter().flatten() {
            let first = ch[0];
            ch.splice(0..0, std::iter::repeat_n(first, k));
        }
        out
    }

    /// Converts every sample to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Trial<U> {
        let conv = |v: T| U::lit(v.as_f64());
        Trial {
            id: self.id.clone(),
            sample_rate: self.sample_rate,
            markers: self
                .markers
                .iter()
                .map(|(k, m)| {
                    let samples = m.samples.iter().map(|s| s.map(|p| p.map(conv))).collect();
                    (k.clone(), MarkerTrajectory { name: m.name.clone(), samples })
                })
                .collect(),
            grf_left: self.grf_left.as_ref().map(|c| c.iter().copied().map(conv).collect()),
            grf_right: self.grf_right.as_ref().map(|c| c.iter().copied().map(conv).collect()),
            frame: self.frame,
        }
    }
}

/// Per-frame mean of the available pelvis markers. Frames where all four are gaps stay gaps.
///
/// Coordinates are summed in sorted order, so the result does not depend on which marker
/// carries which position.
pub fn pelvis_centroid<T: Scalar>(trial: &Trial<T>) -> MarkerTrajectory<T> {
    let n = trial.frame_count();
    let present: Vec<&MarkerTrajectory<T>> = PELVIS_MARKERS.iter().filter_map(|m| trial.markers.get(*m)).collect();
    let samples = (0..n)
        .map(|i| {
            let pts: Vec<Vec3<T>> = present.iter().filter_map(|m| m.samples[i]).collect();
            if pts.is_empty() {
                return None;
            }
            let count = T::lit(pts.len() as f64);
            let mut c = [T::zero(); 3];
            for (axis, slot) in c.iter_mut().enumerate() {
                let mut vals: Vec<T> = pts.iter().map(|p| p[axis]).collect();
                vals.sort_by(|a, b| a.partial_cmp(b).expect("finite marker data"));
                *slot = vals.into_iter().fold(T::zero(), |acc, v| acc + v) / count;
            }
            Some(c)
        })
        .collect();
    MarkerTrajectory::new("PELVIS", samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pelvis_trial(points: [[f64; 3]; 4], gaps: &[usize]) -> Trial {
        let markers = PELVIS_MARKERS.iter().enumerate().map(|(i, name)| {
            let s = if gaps.contains(&i) { None } else { Some(points[i]) };
            MarkerTrajectory::new(*name, vec![s, Some(points[i])])
        });
        Trial::new("t", 200.0, markers, None, None, CoordinateFrame::default()).unwrap()
    }

    #[test]
    fn centroid_of_symmetric_square() {
        let t = pelvis_trial([[0.1, 0.1, 1.0], [-0.1, 0.1, 1.0], [0.1, -0.1, 1.0], [-0.1, -0.1, 1.0]], &[]);
        let c = pelvis_centroid(&t);
        assert_eq!(c.samples[0], Some([0.0, 0.0, 1.0]));
    }

    #[test]
    fn centroid_skips_gap() {
        let t = pelvis_trial([[0.3, 0.0, 1.0], [0.0, 0.0, 1.0], [0.0, 0.3, 1.0], [9.0, 9.0, 9.0]], &[3]);
        assert_eq!(t.markers[RPSIS].samples[0], None);
        let c = pelvis_centroid(&t).samples[0].unwrap();
        assert!((c[0] - 0.1).abs() < 1e-15 && (c[1] - 0.1).abs() < 1e-15 && c[2] == 1.0);
    }

    #[test]
    fn centroid_all_gap_propagates() {
        let t = pelvis_trial([[0.0; 3]; 4], &[0, 1, 2, 3]);
        let c = pelvis_centroid(&t);
        assert_eq!(c.samples[0], None);
        assert!(c.samples[1].is_some());
    }

    #[test]
    fn trial_rejects_unequal_lengths() {
        let a = MarkerTrajectory::from_points("A", vec![[0.0; 3]; 3]);
        let b = MarkerTrajectory::from_points("B", vec![[0.0; 3]; 4]);
        assert!(Trial::new("t", 200.0, [a.clone(), b], None, None, CoordinateFrame::default()).is_err());
        assert!(matches!(
            Trial::new("t", 0.0, [a], None, None, CoordinateFrame::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mirrored_label_swaps_prefix() {
        assert_eq!(mirrored_label("LFCC"), "RFCC");
        assert_eq!(mirrored_label("RASIS"), "LASIS");
        assert_eq!(mirrored_label("C7"), "C7");
    }
}
