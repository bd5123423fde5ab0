use super::prep::prepare;
use super::{extremum_candidates, finalize, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{butterworth_zero_phase, ExtremumKind, FilterKind, GaitContext};
use crate::trial::Trial;

/// HS at maxima of heel AP position highpass-filtered at `desailly_hs_cutoff_mult` times the
/// gait frequency; TO at minima of toe AP position highpass-filtered at
/// `desailly_to_cutoff_mult` times the gait frequency. Alternation keeps one TO between
/// consecutive HS.
pub fn detect_desailly<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let hs_cutoff = cfg.desailly_hs_cutoff_mult * ctx.gait_frequency;
    let to_cutoff = cfg.desailly_to_cutoff_mult * ctx.gait_frequency;
    let prep = prepare(trial, cfg)?;
    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let heel = butterworth_zero_phase(s.heel.x(), hs_cutoff, FilterKind::Highpass, cfg.filter_order)?;
        let toe = butterworth_zero_phase(s.toe.x(), to_cutoff, FilterKind::Highpass, cfg.filter_order)?;
        sides.push(SideCandidates {
            side: s.side,
            hs: extremum_candidates(&heel.values, ExtremumKind::Max, cfg),
            to: extremum_candidates(&toe.values, ExtremumKind::Min, cfg),
            gaps: s.gaps.clone(),
        });
    }
    Ok(finalize("desailly", sides, Ranking::Extremum, ctx, cfg, prep.sample_rate))
}
