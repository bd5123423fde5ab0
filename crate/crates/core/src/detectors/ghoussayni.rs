use super::prep::{prepare, Marker};
use super::{finalize, Candidate, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::DetectionResult;
use crate::scalar::Scalar;
use crate::signal::{threshold_crossings, Direction, GaitContext, Series};
use crate::trial::Trial;

/// Speed in the sagittal (AP, vertical) plane.
fn sagittal_speed<T: Scalar>(m: &Marker<T>) -> Result<Series<T>> {
    let [vx, _, vz] = m.velocity()?;
    Ok(vx.zip_with(&vz, |a, b| (a * a + b * b).sqrt()))
}

/// HS where heel sagittal speed falls below the threshold; TO where toe sagittal speed rises
/// above it. Both crossings are debounced.
pub fn detect_ghoussayni<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    let threshold = T::lit(cfg.ghoussayni_speed_threshold);
    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let heel = sagittal_speed(&s.heel)?;
        let toe = sagittal_speed(&s.toe)?;
        let hs = threshold_crossings(&heel, threshold, Direction::Falling, cfg.debounce);
        let to = threshold_crossings(&toe, threshold, Direction::Rising, cfg.debounce);
        sides.push(SideCandidates {
            side: s.side,
            hs: hs.into_iter().map(Candidate::earliest).collect(),
            to: to.into_iter().map(Candidate::earliest).collect(),
            gaps: s.gaps.clone(),
        });
    }
    Ok(finalize("ghoussayni", sides, Ranking::Earliest, ctx, cfg, prep.sample_rate))
}
