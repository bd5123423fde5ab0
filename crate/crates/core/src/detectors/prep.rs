//! Marker preprocessing shared by the detectors: gap repair and smoothing.

use crate::config::DetectorConfig;
use crate::error::Result;
use crate::events::Side;
use crate::scalar::{norm3, Scalar};
use crate::signal::{butterworth_zero_phase, derivative, FilterKind, Series};
use crate::trial::{bridge_all, fill_gaps, heel_marker, pelvis_centroid, toe_marker, GapSpan, MarkerTrajectory, Trial};

/// Smoothed, gap-free position series of one marker, one per axis.
pub(crate) struct Marker<T: Scalar> {
    pub axes: [Series<T>; 3],
}

impl<T: Scalar> Marker<T> {
    pub fn x(&self) -> &Series<T> {
        &self.axes[0]
    }

    pub fn z(&self) -> &Series<T> {
        &self.axes[2]
    }

    pub fn velocity(&self) -> Result<[Series<T>; 3]> {
        Ok([derivative(&self.axes[0])?, derivative(&self.axes[1])?, derivative(&self.axes[2])?])
    }

    /// Magnitude of the 3D velocity.
    pub fn speed(&self) -> Result<Series<T>> {
        let [vx, vy, vz] = self.velocity()?;
        let values = (0..vx.len()).map(|i| norm3(&[vx.values[i], vy.values[i], vz.values[i]])).collect();
        Ok(Series { values, sample_rate: vx.sample_rate })
    }
}

pub(crate) struct SideMarkers<T: Scalar> {
    pub side: Side,
    pub heel: Marker<T>,
    pub toe: Marker<T>,
    /// Unfilled gaps of this side's foot markers and of the pelvis.
    pub gaps: Vec<GapSpan>,
}

pub(crate) struct Prepared<T: Scalar> {
    pub sample_rate: f64,
    pub frames: usize,
    pub pelvis: Marker<T>,
    pub sides: [SideMarkers<T>; 2],
}

fn smooth_marker<T: Scalar>(traj: &MarkerTrajectory<T>, fs: f64, cfg: &DetectorConfig) -> Result<(Marker<T>, Vec<GapSpan>)> {
    let filled = fill_gaps(traj, cfg.max_gap_frames);
    let dense = bridge_all(&filled.trajectory).unwrap_or_else(|| vec![[T::zero(); 3]; traj.len()]);
    let axis = |a: usize| -> Result<Series<T>> {
        let raw = Series { values: dense.iter().map(|p| p[a]).collect(), sample_rate: fs };
        butterworth_zero_phase(&raw, cfg.smoothing_cutoff, FilterKind::Lowpass, cfg.filter_order)
    };
    Ok((Marker { axes: [axis(0)?, axis(1)?, axis(2)?] }, filled.unfilled))
}

/// Repairs short gaps, bridges long ones and lowpass-filters the pelvis centroid and both feet.
pub(crate) fn prepare<T: Scalar>(trial: &Trial<T>, cfg: &DetectorConfig) -> Result<Prepared<T>> {
    let fs = trial.sample_rate;
    for side in Side::BOTH {
        trial.marker(heel_marker(side))?;
        trial.marker(toe_marker(side))?;
    }
    let (pelvis, pelvis_gaps) = smooth_marker(&pelvis_centroid(trial), fs, cfg)?;
    let side = |side: Side| -> Result<SideMarkers<T>> {
        let (heel, heel_gaps) = smooth_marker(trial.marker(heel_marker(side))?, fs, cfg)?;
        let (toe, toe_gaps) = smooth_marker(trial.marker(toe_marker(side))?, fs, cfg)?;
        let mut gaps: Vec<GapSpan> = pelvis_gaps.iter().chain(&heel_gaps).chain(&toe_gaps).copied().collect();
        gaps.sort_by_key(|g| (g.start, g.end));
        gaps.dedup();
        Ok(SideMarkers { side, heel, toe, gaps })
    };
    Ok(Prepared { sample_rate: fs, frames: trial.frame_count(), sides: [side(Side::Left)?, side(Side::Right)?], pelvis })
}
