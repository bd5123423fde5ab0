use super::prep::{prepare, Prepared};
use super::{extremum_candidates, finalize, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{ExtremumKind, GaitContext};
use crate::trial::Trial;

/// HS at maxima of heel AP position relative to the pelvis; TO at minima of toe AP position
/// relative to the pelvis.
pub fn detect_zeni<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    Ok(zeni_from_prepared(&prep, ctx, cfg, "zeni"))
}

pub(crate) fn zeni_from_prepared<T: Scalar>(prep: &Prepared<T>, ctx: &GaitContext, cfg: &DetectorConfig, method: &str) -> DetectionResult {
    let pelvis_x = prep.pelvis.x();
    let sides = prep
        .sides
        .iter()
        .map(|s| {
            let heel = s.heel.x().zip_with(pelvis_x, |h, p| h - p);
            let toe = s.toe.x().zip_with(pelvis_x, |t, p| t - p);
            SideCandidates {
                side: s.side,
                hs: extremum_candidates(&heel.values, ExtremumKind::Max, cfg),
                to: extremum_candidates(&toe.values, ExtremumKind::Min, cfg),
                gaps: s.gaps.clone(),
            }
        })
        .collect();
    finalize(method, sides, Ranking::Extremum, ctx, cfg, prep.sample_rate)
}
