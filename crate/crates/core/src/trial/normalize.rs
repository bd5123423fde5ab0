use super::{pelvis_centroid, CoordinateFrame, SignedAxis, Trial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimum net horizontal pelvis travel required to infer the walking direction, meters.
pub const MIN_PROGRESSION_DISPLACEMENT: f64 = 0.5;

/// Remaps coordinates so walking progresses along +X and vertical is +Z.
///
/// The vertical axis comes from `trial.frame.vertical_axis`. The progression axis is the
/// horizontal axis carrying the larger net pelvis displacement (or the frame's hint, if set),
/// signed by that displacement. The remaining axis becomes Y unchanged. The mapping is a pure
/// axis permutation with sign flips, so inter-marker distances are preserved exactly.
pub fn normalize_coordinates<T: Scalar>(trial: &Trial<T>) -> Result<Trial<T>> {
    let vertical = trial.frame.vertical_axis;
    let centroid = pelvis_centroid(trial);
    let first = centroid.samples.iter().flatten().next();
    let last = centroid.samples.iter().rev().flatten().next();
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::NoProgression { displacement: 0.0 }),
    };
    let disp: [f64; 3] = [0, 1, 2].map(|ax| (last[ax] - first[ax]).as_f64());
    let horizontal: Vec<usize> = (0..3).filter(|&ax| ax != vertical.index).collect();
    let planar = horizontal.iter().map(|&ax| disp[ax] * disp[ax]).sum::<f64>().sqrt();
    if planar.is_nan() || planar < MIN_PROGRESSION_DISPLACEMENT {
        return Err(Error::NoProgression { displacement: planar });
    }

    let prog_index = match trial.frame.progression_axis {
        Some(hint) if hint.index != vertical.index => hint.index,
        _ => {
            if disp[horizontal[0]].abs() >= disp[horizontal[1]].abs() {
                horizontal[0]
            } else {
                horizontal[1]
            }
        }
    };
    if disp[prog_index] == 0.0 {
        return Err(Error::NoProgression { displacement: 0.0 });
    }
    let progression = SignedAxis { index: prog_index, positive: disp[prog_index] > 0.0 };
    let lateral = 3 - prog_index - vertical.index;

    let signed = |v: T, positive: bool| if positive { v } else { -v };
    let mut out = trial.map_points(|p| {
        [signed(p[progression.index], progression.positive), p[lateral], signed(p[vertical.index], vertical.positive)]
    });
    out.frame = CoordinateFrame { units_converted: trial.frame.units_converted, ..CoordinateFrame::NORMALIZED };
    Ok(out)
}
