use super::prep::prepare;
use super::{extremum_candidates, finalize, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{derivative, ExtremumKind, GaitContext};
use crate::trial::Trial;

/// HS at minima of heel AP acceleration; TO at maxima of toe AP acceleration.
pub fn detect_hsue<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let heel_ax = derivative(&derivative(s.heel.x())?)?;
        let toe_ax = derivative(&derivative(s.toe.x())?)?;
        sides.push(SideCandidates {
            side: s.side,
            hs: extremum_candidates(&heel_ax.values, ExtremumKind::Min, cfg),
            to: extremum_candidates(&toe_ax.values, ExtremumKind::Max, cfg),
            gaps: s.gaps.clone(),
        });
    }
    Ok(finalize("hsue", sides, Ranking::Extremum, ctx, cfg, prep.sample_rate))
}
