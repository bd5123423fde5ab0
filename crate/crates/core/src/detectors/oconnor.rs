use super::prep::prepare;
use super::{extremum_candidates, finalize, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{derivative, ExtremumKind, GaitContext};
use crate::trial::Trial;

/// HS at minima and TO at maxima of the vertical velocity of the heel-toe midpoint.
pub fn detect_oconnor<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    let half = T::lit(0.5);
    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let center = s.heel.z().zip_with(s.toe.z(), |h, t| (h + t) * half);
        let vz = derivative(&center)?;
        sides.push(SideCandidates {
            side: s.side,
            hs: extremum_candidates(&vz.values, ExtremumKind::Min, cfg),
            to: extremum_candidates(&vz.values, ExtremumKind::Max, cfg),
            gaps: s.gaps.clone(),
        });
    }
    Ok(finalize("oconnor", sides, Ranking::Extremum, ctx, cfg, prep.sample_rate))
}
