use super::prep::prepare;
use super::{extremum_candidates, finalize, Candidate, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{derivative, ExtremumKind, GaitContext, Series};
use crate::trial::Trial;

/// Fractional frame where `jerk` changes sign between samples `j` and `j + 1`, for some `j` in
/// `i - 1 ..= i`, by linear interpolation. The sign change must match the extremum: positive to
/// negative for a maximum, negative to positive for a minimum.
pub(crate) fn jerk_zero<T: Scalar>(jerk: &[T], i: usize, kind: ExtremumKind) -> Option<f64> {
    let oriented = |v: T| if kind == ExtremumKind::Max { v.as_f64() } else { -v.as_f64() };
    (i.saturating_sub(1)..=i).filter(|&j| j + 1 < jerk.len()).find_map(|j| {
        let (a, b) = (oriented(jerk[j]), oriented(jerk[j + 1]));
        if a >= 0.0 && b <= 0.0 && a != b {
            Some(j as f64 + a / (a - b))
        } else {
            None
        }
    })
}

/// Extremum candidates of `acc` kept only where the jerk crosses zero within one frame, moved to
/// the nearest frame of that zero.
pub(crate) fn jerk_validated<T: Scalar>(acc: &Series<T>, kind: ExtremumKind, cfg: &DetectorConfig) -> Result<Vec<Candidate>> {
    let jerk = derivative(acc)?;
    Ok(extremum_candidates(&acc.values, kind, cfg)
        .into_iter()
        .filter_map(|c| {
            let zero = jerk_zero(&jerk.values, c.frame, kind)?;
            let frame = zero.round() as usize;
            Some(Candidate { frame, offset: zero - frame as f64, ..c })
        })
        .collect())
}

/// HS at maxima of heel vertical acceleration; TO at maxima of toe AP acceleration. Each needs a
/// jerk zero crossing within one frame and is placed at that crossing.
pub fn detect_hreljac<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let heel_az = derivative(&derivative(s.heel.z())?)?;
        let toe_ax = derivative(&derivative(s.toe.x())?)?;
        sides.push(SideCandidates {
            side: s.side,
            hs: jerk_validated(&heel_az, ExtremumKind::Max, cfg)?,
            to: jerk_validated(&toe_ax, ExtremumKind::Max, cfg)?,
            gaps: s.gaps.clone(),
        });
    }
    Ok(finalize("hreljac", sides, Ranking::Extremum, ctx, cfg, prep.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_acceleration_extrema_at_jerk_zeros() {
        let fs = 200.0;
        let acc: Series = Series::from_fn(600, fs, |t| (2.0 * PI * t).sin());
        let cfg = DetectorConfig { extrema_prominence: Some(0.0), ..DetectorConfig::default() };
        let mut frames: Vec<usize> = jerk_validated(&acc, ExtremumKind::Max, &cfg)
            .unwrap()
            .into_iter()
            .chain(jerk_validated(&acc, ExtremumKind::Min, &cfg).unwrap())
            .map(|c| c.frame)
            .collect();
        frames.sort_unstable();
        let expected: Vec<f64> = (0..6).map(|k| (0.25 + 0.5 * k as f64) * fs).collect();
        assert_eq!(frames.len(), expected.len());
        for (f, e) in frames.iter().zip(&expected) {
            assert!((*f as f64 - e).abs() <= 1.0, "{f} vs {e}");
        }
    }

    #[test]
    fn zero_location_is_interpolated() {
        let jerk = [3.0, 1.0, -3.0, -4.0];
        assert_eq!(jerk_zero(&jerk, 1, ExtremumKind::Max), Some(1.25));
        assert_eq!(jerk_zero(&jerk, 1, ExtremumKind::Min), None);
        assert_eq!(jerk_zero(&[1.0, 2.0, 3.0], 1, ExtremumKind::Max), None);
    }
}
