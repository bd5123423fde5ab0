use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every numeric constant used by the detectors and by truth extraction.
///
/// Deserializes from JSON with the same field names; absent fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    /// Sagittal speed threshold for the Ghoussayni rule, m/s.
    pub ghoussayni_speed_threshold: f64,
    /// Vertical force threshold for reference events, N.
    pub grf_threshold: f64,
    /// Desailly heel high-pass cutoff as a multiple of gait frequency.
    pub desailly_hs_cutoff_mult: f64,
    /// Desailly toe high-pass cutoff as a multiple of gait frequency.
    pub desailly_to_cutoff_mult: f64,
    /// Bonci rearfoot-contact heel speed threshold as a multiple of walking speed.
    pub bonci_rearfoot_mult: f64,
    /// Bonci forefoot-contact and toe-off speed threshold as a multiple of walking speed.
    pub bonci_mult: f64,
    /// Zero-phase low-pass cutoff applied to marker coordinates, Hz.
    pub smoothing_cutoff: f64,
    /// Butterworth order of each filter pass.
    pub filter_order: usize,
    /// Minimum spacing between same-kind events as a fraction of the gait period.
    pub min_event_separation_frac: f64,
    /// Hold time for threshold crossings, s.
    pub debounce: f64,
    /// Fixed extremum prominence; `None` selects 10% of each series' interquartile range.
    pub extrema_prominence: Option<f64>,
    /// Drop extremum candidates whose prominence is below this fraction of the upper-quartile
    /// prominence of same-side same-kind candidates. 0 disables the gate.
    pub relative_prominence_gate: f64,
    /// Longest marker gap (frames) that is linearly interpolated.
    pub max_gap_frames: usize,
    /// Report extremum events with parabolic sub-frame timing.
    pub subframe_refinement: bool,
    /// Apply a 20 Hz zero-phase low-pass to force channels before thresholding.
    pub grf_lowpass: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            ghoussayni_speed_threshold: 0.5,
            grf_threshold: 20.0,
            desailly_hs_cutoff_mult: 0.5,
            desailly_to_cutoff_mult: 1.1,
            bonci_rearfoot_mult: 0.5,
            bonci_mult: 0.8,
            smoothing_cutoff: 7.0,
            filter_order: 4,
            min_event_separation_frac: 0.4,
            debounce: 0.05,
            extrema_prominence: None,
            relative_prominence_gate: 0.3,
            max_gap_frames: 10,
            subframe_refinement: false,
            grf_lowpass: false,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ghoussayni_speed_threshold", self.ghoussayni_speed_threshold),
            ("grf_threshold", self.grf_threshold),
            ("smoothing_cutoff", self.smoothing_cutoff),
            ("debounce", self.debounce),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        let mults = [
            ("desailly_hs_cutoff_mult", self.desailly_hs_cutoff_mult),
            ("desailly_to_cutoff_mult", self.desailly_to_cutoff_mult),
            ("bonci_rearfoot_mult", self.bonci_rearfoot_mult),
            ("bonci_mult", self.bonci_mult),
        ];
        for (name, v) in mults {
            if !(v > 0.0 && v <= 2.0) {
                return Err(Error::Config(format!("{name} must be in (0, 2], got {v}")));
            }
        }
        if !(self.min_event_separation_frac > 0.0 && self.min_event_separation_frac < 1.0) {
            return Err(Error::Config(format!(
                "min_event_separation_frac must be in (0, 1), got {}",
                self.min_event_separation_frac
            )));
        }
        if !(0.0..1.0).contains(&self.relative_prominence_gate) {
            return Err(Error::Config(format!(
                "relative_prominence_gate must be in [0, 1), got {}",
                self.relative_prominence_gate
            )));
        }
        if let Some(p) = self.extrema_prominence {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::Config(format!("extrema_prominence must be > 0, got {p}")));
            }
        }
        if self.filter_order == 0 {
            return Err(Error::Config("filter_order must be >= 1".into()));
        }
        Ok(())
    }

    /// Reads a JSON override file. Unknown keys are rejected.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: DetectorConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
