use serde::{Deserialize, Serialize};

use super::MarkerTrajectory;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapReason {
    /// Interior gap longer than the fill limit.
    TooLong,
    /// Gap touching the first frame; there is no left anchor to interpolate from.
    Leading,
    /// Gap touching the last frame.
    Trailing,
}

/// Frames `start..end` left unfilled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpan {
    pub start: usize,
    pub end: usize,
    pub reason: GapReason,
}

impl GapSpan {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapFill<T: Scalar> {
    pub trajectory: MarkerTrajectory<T>,
    pub unfilled: Vec<GapSpan>,
}

/// Linearly interpolates interior gaps of at most `max_gap_frames` frames.
///
/// Longer gaps, and any gap at either end of the trajectory, are left in place and listed.
pub fn fill_gaps<T: Scalar>(traj: &MarkerTrajectory<T>, max_gap_frames: usize) -> GapFill<T> {
    let mut samples = traj.samples.clone();
    let mut unfilled = Vec::new();
    let n = samples.len();
    let mut i = 0;
    while i < n {
        if samples[i].is_some() {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && samples[i].is_none() {
            i += 1;
        }
        let end = i;
        let reason = if start == 0 {
            Some(GapReason::Leading)
        } else if end == n {
            Some(GapReason::Trailing)
        } else if end - start > max_gap_frames {
            Some(GapReason::TooLong)
        } else {
            None
        };
        match reason {
            Some(reason) => unfilled.push(GapSpan { start, end, reason }),
            None => {
                let a = samples[start - 1].expect("anchor before gap");
                let b = samples[end].expect("anchor after gap");
                let span = T::lit((end - start + 1) as f64);
                for (k, slot) in samples[start..end].iter_mut().enumerate() {
                    let w = T::lit((k + 1) as f64) / span;
                    *slot = Some([0, 1, 2].map(|ax| a[ax] + (b[ax] - a[ax]) * w));
                }
            }
        }
    }
    GapFill { trajectory: MarkerTrajectory::new(traj.name.clone(), samples), unfilled }
}

/// Dense copy with every gap bridged: interior gaps interpolated regardless of length, leading
/// and trailing gaps held at the nearest sample. `None` if the trajectory has no samples at all.
pub(crate) fn bridge_all<T: Scalar>(traj: &MarkerTrajectory<T>) -> Option<Vec<[T; 3]>> {
    let first = traj.samples.iter().position(Option::is_some)?;
    let filled = fill_gaps(traj, usize::MAX).trajectory;
    let last = filled.samples.iter().rposition(Option::is_some)?;
    let mut out: Vec<[T; 3]> = Vec::with_capacity(filled.len());
    for (i, s) in filled.samples.iter().enumerate() {
        let p = match s {
            Some(p) => *p,
            None if i < first => filled.samples[first].expect("first sample"),
            None => filled.samples[last].expect("last sample"),
        };
        out.push(p);
    }
    Some(out)
}
