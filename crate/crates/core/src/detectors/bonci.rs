use super::prep::prepare;
use super::zeni::zeni_from_prepared;
use super::{finalize, Candidate, Ranking, SideCandidates};
use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::{DetectionResult, EventKind};
use crate::scalar::Scalar;
use crate::signal::{find_extrema, ExtremumKind, GaitContext};
use crate::trial::Trial;

/// Half-width of the refinement window around each seed, as a fraction of the gait period.
const WINDOW_FRAC: f64 = 0.25;
/// Minimum prominence of a heel speed peak, as a fraction of walking speed.
const HEEL_PEAK_PROMINENCE_FRAC: f64 = 0.1;

/// Zeni seeds refined by foot speed thresholds relative to walking speed.
///
/// HS: first frame at or after the seed, within a quarter period, where heel 3D speed is below
/// `bonci_rearfoot_mult` (heel lower than toe at the seed) or `bonci_mult` (otherwise) times
/// walking speed. TO: first frame within a quarter period of the seed where toe 3D speed rises
/// above `bonci_mult` times walking speed; if the heel speed has a local peak between the window
/// start and that frame, the heel must by then be slower than at the peak. Seeds without a
/// qualifying frame are kept and flagged as fallbacks.
pub fn detect_bonci<T: Scalar>(trial: &Trial<T>, ctx: &GaitContext, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let prep = prepare(trial, cfg)?;
    let seeds = zeni_from_prepared(&prep, ctx, cfg, "bonci");
    let n = prep.frames;
    let w = (WINDOW_FRAC * ctx.gait_period * prep.sample_rate).round() as usize;
    let v = ctx.walking_speed;

    let mut sides = Vec::with_capacity(2);
    for s in &prep.sides {
        let heel_speed: Vec<f64> = s.heel.speed()?.values.iter().map(|x| x.as_f64()).collect();
        let toe_speed: Vec<f64> = s.toe.speed()?.values.iter().map(|x| x.as_f64()).collect();
        let (heel_z, toe_z) = (&s.heel.z().values, &s.toe.z().values);

        let hs = seeds
            .events_of(s.side, EventKind::HeelStrike)
            .map(|e| {
                let seed = e.frame;
                let rearfoot = heel_z[seed] < toe_z[seed];
                let threshold = v * if rearfoot { cfg.bonci_rearfoot_mult } else { cfg.bonci_mult };
                let end = (seed + w).min(n - 1);
                let hit = (threshold > 0.0).then(|| (seed..=end).find(|&i| heel_speed[i] < threshold)).flatten();
                refined(seed, hit)
            })
            .collect();

        let threshold = v * cfg.bonci_mult;
        let peak_prominence = HEEL_PEAK_PROMINENCE_FRAC * v;
        let to = seeds
            .events_of(s.side, EventKind::ToeOff)
            .map(|e| {
                let seed = e.frame;
                let start = seed.saturating_sub(w).max(1);
                let end = (seed + w).min(n - 1);
                let heel_ok = |c: usize| {
                    let peaks = find_extrema(&heel_speed[start..=c], ExtremumKind::Max, 1, peak_prominence);
                    peaks.last().is_none_or(|p| heel_speed[c] < p.value)
                };
                let hit = (threshold > 0.0)
                    .then(|| {
                        (start..=end).find(|&i| toe_speed[i] > threshold && toe_speed[i - 1] <= threshold && heel_ok(i))
                    })
                    .flatten();
                refined(seed, hit)
            })
            .collect();

        sides.push(SideCandidates { side: s.side, hs, to, gaps: s.gaps.clone() });
    }
    Ok(finalize("bonci", sides, Ranking::Earliest, ctx, cfg, prep.sample_rate))
}

fn refined(seed: usize, hit: Option<usize>) -> Candidate {
    match hit {
        Some(frame) => Candidate::earliest(frame),
        None => Candidate { fallback: true, ..Candidate::earliest(seed) },
    }
}
