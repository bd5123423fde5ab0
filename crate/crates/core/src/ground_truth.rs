//! Reference events from vertical ground reaction force.

use crate::config::DetectorConfig;
use crate::error::{Error, Result};
use crate::events::{DetectionResult, DiagnosticFlag, EventKind, GaitEvent, Side, GRF_TRUTH_SOURCE};
use crate::scalar::Scalar;
use crate::signal::{all_crossings, butterworth_zero_phase, Direction, FilterKind, Series};
use crate::trial::Trial;

/// Cutoff of the optional force lowpass, Hz.
pub const GRF_LOWPASS_CUTOFF: f64 = 20.0;
const GRF_LOWPASS_ORDER: usize = 4;

/// Per side, HS at debounced rising and TO at debounced falling crossings of `grf_threshold`.
///
/// Sides without a force channel are skipped; a trial with no force channel at all is an error.
pub fn events_from_grf<T: Scalar>(trial: &Trial<T>, cfg: &DetectorConfig) -> Result<DetectionResult> {
    if trial.grf_left.is_none() && trial.grf_right.is_none() {
        return Err(Error::GroundTruthUnavailable);
    }
    let mut events = Vec::new();
    let mut flags = Vec::new();
    for side in Side::BOTH {
        let Some(force) = trial.grf(side) else {
            continue;
        };
        let mut series = Series::new(force.to_vec(), trial.sample_rate)?;
        if cfg.grf_lowpass {
            series = butterworth_zero_phase(&series, GRF_LOWPASS_CUTOFF, FilterKind::Lowpass, GRF_LOWPASS_ORDER)?;
        }
        let before = events.len();
        for (frame, direction) in all_crossings(&series, T::lit(cfg.grf_threshold), cfg.debounce) {
            let kind = match direction {
                Direction::Rising => EventKind::HeelStrike,
                Direction::Falling => EventKind::ToeOff,
            };
            events.push(GaitEvent::at_frame(side, kind, frame, trial.sample_rate, GRF_TRUTH_SOURCE));
        }
        for kind in EventKind::BOTH {
            if !events[before..].iter().any(|e| e.kind == kind) {
                flags.push(DiagnosticFlag::NoEvents { side, kind });
            }
        }
    }
    let mut result = DetectionResult::from_events(GRF_TRUTH_SOURCE, events);
    result.diagnostics.flags = flags;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::{CoordinateFrame, MarkerTrajectory};

    fn force_trial(left: Vec<f64>, right: Option<Vec<f64>>) -> Trial {
        let n = left.len();
        let marker = MarkerTrajectory::from_points("LFCC", vec![[0.0; 3]; n]);
        Trial::new("grf", 200.0, [marker], Some(left), right, CoordinateFrame::default()).unwrap()
    }

    #[test]
    fn step_gives_heel_strike_at_step_frame() {
        let mut f = vec![0.0; 30];
        f.extend(vec![600.0; 40]);
        let r = events_from_grf(&force_trial(f, None), &DetectorConfig::default()).unwrap();
        assert_eq!(r.events.len(), 1);
        assert_eq!((r.events[0].kind, r.events[0].frame, r.events[0].side), (EventKind::HeelStrike, 30, Side::Left));
        assert_eq!(r.events[0].source, GRF_TRUTH_SOURCE);
    }

    #[test]
    fn stance_gives_hs_and_to() {
        let mut f = vec![0.0; 30];
        f.extend(vec![600.0; 100]);
        f.extend(vec![0.0; 30]);
        let r = events_from_grf(&force_trial(f.clone(), Some(f)), &DetectorConfig::default()).unwrap();
        assert_eq!(r.events.len(), 4);
        assert_eq!(r.count(Side::Right, EventKind::ToeOff), 1);
        assert!(r.events_of(Side::Left, EventKind::ToeOff).all(|e| e.frame == 130));
    }

    #[test]
    fn low_force_gives_nothing() {
        let r = events_from_grf(&force_trial(vec![15.0; 100], None), &DetectorConfig::default()).unwrap();
        assert!(r.events.is_empty());
        assert_eq!(r.diagnostics.flags.len(), 2);
    }

    #[test]
    fn no_channels_is_error() {
        let marker = MarkerTrajectory::from_points("LFCC", vec![[0.0; 3]; 10]);
        let t = Trial::new("x", 200.0, [marker], None, None, CoordinateFrame::default()).unwrap();
        assert!(matches!(events_from_grf(&t, &DetectorConfig::default()), Err(Error::GroundTruthUnavailable)));
    }
}
