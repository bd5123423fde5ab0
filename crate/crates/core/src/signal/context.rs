use serde::{Deserialize, Serialize};

use super::{derivative, Series};
use crate::error::{Error, Result};
use crate::events::Side;
use crate::scalar::{median, Scalar};
use crate::trial::{bridge_all, heel_marker, pelvis_centroid, Trial};

/// Shortest gait period searched, seconds.
pub const MIN_GAIT_PERIOD: f64 = 0.4;
/// Longest gait period searched, seconds.
pub const MAX_GAIT_PERIOD: f64 = 2.5;
/// Normalized autocorrelation a period peak must reach.
pub const MIN_AUTOCORRELATION_PEAK: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitContext {
    /// Seconds per gait cycle.
    pub gait_period: f64,
    /// Hz, `1 / gait_period`.
    pub gait_frequency: f64,
    /// Pelvis progression speed, m/s.
    pub walking_speed: f64,
}

impl GaitContext {
    pub fn new(gait_period: f64, walking_speed: f64) -> Self {
        GaitContext { gait_period, gait_frequency: 1.0 / gait_period, walking_speed }
    }
}

/// Gait period from the heel-minus-pelvis AP autocorrelation of both sides, and walking speed
/// as the median absolute pelvis AP velocity. Expects a normalized trial.
pub fn estimate_gait_context<T: Scalar>(trial: &Trial<T>) -> Result<GaitContext> {
    let fs = trial.sample_rate;
    let pelvis = bridge_all(&pelvis_centroid(trial)).ok_or_else(|| Error::MissingMarker("pelvis".into()))?;
    let pelvis_x: Vec<T> = pelvis.iter().map(|p| p[0]).collect();

    let mut relative = Vec::with_capacity(2);
    for side in Side::BOTH {
        let name = heel_marker(side);
        let heel = bridge_all(trial.marker(name)?).ok_or_else(|| Error::MissingMarker(name.into()))?;
        relative.push(heel.iter().zip(&pelvis_x).map(|(h, p)| h[0] - *p).collect::<Vec<T>>());
    }
    let gait_period = dominant_period(&relative, fs)?;

    let velocity = derivative(&Series { values: pelvis_x, sample_rate: fs })?;
    let speeds: Vec<f64> = velocity.values.iter().map(|v| v.abs().as_f64()).collect();
    let walking_speed = median(&speeds).unwrap_or(0.0);

    Ok(GaitContext::new(gait_period, walking_speed))
}

/// Lag, in seconds, of the highest local maximum of the mean normalized autocorrelation of
/// `channels` within the admissible period band, refined by a parabola through its neighbours.
pub fn dominant_period<T: Scalar>(channels: &[Vec<T>], sample_rate: f64) -> Result<f64> {
    let n = channels.iter().map(Vec::len).min().unwrap_or(0);
    let min_lag = (MIN_GAIT_PERIOD * sample_rate).ceil() as usize;
    let max_lag = ((MAX_GAIT_PERIOD * sample_rate).floor() as usize).min(n.saturating_sub(2));
    if n < 3 || max_lag <= min_lag {
        return Err(Error::NoDominantPeriod { best: 0.0 });
    }

    let mut acf = vec![0.0; max_lag + 2];
    for ch in channels {
        let r = autocorrelation(&ch[..n], max_lag + 1);
        for (a, v) in acf.iter_mut().zip(r) {
            *a += v / channels.len() as f64;
        }
    }

    let mut best: Option<usize> = None;
    for k in min_lag..=max_lag {
        if acf[k] > acf[k - 1] && acf[k] >= acf[k + 1] && best.is_none_or(|b| acf[k] > acf[b]) {
            best = Some(k);
        }
    }
    let peak = best.map_or(f64::NEG_INFINITY, |k| acf[k]);
    let Some(k) = best.filter(|_| peak >= MIN_AUTOCORRELATION_PEAK) else {
        let in_band = acf[min_lag..=max_lag].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Err(Error::NoDominantPeriod { best: peak.max(in_band) });
    };

    let (y0, y1, y2) = (acf[k - 1], acf[k], acf[k + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let offset = if curvature < 0.0 { 0.5 * (y0 - y2) / curvature } else { 0.0 };
    Ok((k as f64 + offset) / sample_rate)
}

/// Biased autocorrelation of the mean-removed series, normalized to 1 at lag 0, for lags
/// `0..=max_lag`.
fn autocorrelation<T: Scalar>(x: &[T], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().map(|v| v.as_f64()).sum::<f64>() / n as f64;
    let d: Vec<f64> = x.iter().map(|v| v.as_f64() - mean).collect();
    let energy: f64 = d.iter().map(|v| v * v).sum();
    (0..=max_lag)
        .map(|k| {
            if energy == 0.0 || k >= n {
                return 0.0;
            }
            d[..n - k].iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / energy
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};
    use std::f64::consts::PI;

    #[test]
    fn unit_period_sinusoid() {
        let fs = 200.0;
        let x: Vec<f64> = (0..2000).map(|i| (2.0 * PI * i as f64 / fs).sin()).collect();
        let period = dominant_period(&[x], fs).unwrap();
        assert!((period - 1.0).abs() <= 1.0 / fs, "{period}");
    }

    #[test]
    fn white_noise_has_no_period() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let x: Vec<f64> = (0..2000).map(|_| normal.sample(&mut rng)).collect();
        assert!(matches!(dominant_period(&[x], 200.0), Err(Error::NoDominantPeriod { .. })));
    }

    #[test]
    fn too_short_for_band() {
        let x = vec![0.0f32, 1.0, 0.0, 1.0];
        assert!(matches!(dominant_period(&[x], 200.0), Err(Error::NoDominantPeriod { .. })));
    }

    #[test]
    fn offset_does_not_change_period() {
        let fs = 100.0;
        let x: Vec<f64> = (0..1000).map(|i| (2.0 * PI * 0.8 * i as f64 / fs).cos()).collect();
        let y: Vec<f64> = x.iter().map(|v| v + 42.0).collect();
        assert!((dominant_period(&[x], fs).unwrap() - dominant_period(&[y], fs).unwrap()).abs() < 1e-9);
    }
}
