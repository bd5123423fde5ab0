//! Deterministic synthetic walking trials with a known event schedule.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{sort_events, DetectionResult, EventKind, GaitEvent, Side};
use crate::trial::{heel_marker, toe_marker, CoordinateFrame, MarkerTrajectory, Trial, LASIS, LPSIS, RASIS, RPSIS};

/// Source label of generator truth events.
pub const SYNTH_TRUTH_SOURCE: &str = "synth_truth";

/// Distance from heel to toe marker along the progression axis, meters.
pub const FOOT_LENGTH: f64 = 0.15;
/// Height of the toe marker above the heel marker when the foot is flat, meters.
pub const TOE_MARKER_HEIGHT: f64 = 0.015;
/// Peak force of the vertical GRF plateau, newtons.
pub const GRF_PLATEAU: f64 = 1.2 * 600.0;
/// Duration of the GRF loading and unloading ramps, seconds.
pub const GRF_RAMP: f64 = 0.03;

/// Lead-in before the first left heel strike, as a fraction of the gait period.
const LEAD_FRACTION: f64 = 0.2;
/// Tail after the last scheduled cycle, as a fraction of the gait period.
const TAIL_FRACTION: f64 = 0.3;
/// Depth of the swing-phase velocity modulation (0 = constant swing speed).
const SWING_EASE: f64 = 0.2;
/// Exponent of the heel swing height profile `s - s^p`.
const HEEL_LIFT_EXPONENT: i32 = 4;
/// Heel AP position ahead of the pelvis at heel strike, as a fraction of stride length.
const HEEL_STRIKE_REACH: f64 = 0.3;
const PELVIS_HEIGHT: f64 = 0.95;
const PELVIS_BOB: f64 = 0.01;
const PELVIS_SWAY: f64 = 0.01;
const FOOT_WIDTH_OFFSET: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_cycles: usize,
    /// Seconds.
    pub gait_period: f64,
    pub stance_fraction: f64,
    /// m/s.
    pub walking_speed: f64,
    /// Peak swing height of the heel, meters.
    pub step_height: f64,
    pub sample_rate: f64,
    /// Standard deviation of white marker noise, meters.
    pub noise_std: f64,
    pub seed: u64,
    /// Right-side schedule delay as a fraction of the gait period.
    pub phase_offset_lr: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_cycles: 10,
            gait_period: 1.1,
            stance_fraction: 0.62,
            walking_speed: 1.2,
            step_height: 0.1,
            sample_rate: 200.0,
            noise_std: 0.0,
            seed: 0,
            phase_offset_lr: 0.5,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gait_period", self.gait_period),
            ("walking_speed", self.walking_speed),
            ("step_height", self.step_height),
            ("sample_rate", self.sample_rate),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.n_cycles == 0 {
            return Err(Error::Parameter("n_cycles must be >= 1".into()));
        }
        if !(self.stance_fraction > 0.4 && self.stance_fraction < 0.8) {
            return Err(Error::Parameter(format!("stance_fraction must be in (0.4, 0.8), got {}", self.stance_fraction)));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::Parameter(format!("noise_std must be >= 0, got {}", self.noise_std)));
        }
        if !(self.phase_offset_lr > 0.0 && self.phase_offset_lr < 1.0) {
            return Err(Error::Parameter(format!("phase_offset_lr must be in (0, 1), got {}", self.phase_offset_lr)));
        }
        Ok(())
    }

    /// Trial length in seconds.
    pub fn duration(&self) -> f64 {
        (LEAD_FRACTION + self.n_cycles as f64 + TAIL_FRACTION) * self.gait_period
    }

    pub fn frame_count(&self) -> usize {
        (self.duration() * self.sample_rate).floor() as usize
    }

    fn first_heel_strike(&self, side: Side) -> f64 {
        let offset = match side {
            Side::Left => 0.0,
            Side::Right => self.phase_offset_lr,
        };
        (LEAD_FRACTION + offset) * self.gait_period
    }
}

/// One scheduled event outside the numbered cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduledEvent {
    pub side: Side,
    pub kind: EventKind,
    pub time: f64,
}

/// Event times the generator built the trial from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSchedule {
    /// `(heel strike, toe off)` times of each numbered left cycle, seconds.
    pub left: Vec<(f64, f64)>,
    pub right: Vec<(f64, f64)>,
    /// Events of the partial cycles before the first and after the last numbered cycle that
    /// still fall inside the trial.
    pub boundary: Vec<ScheduledEvent>,
    pub sample_rate: f64,
}

impl TruthSchedule {
    pub fn cycles(&self, side: Side) -> &[(f64, f64)] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn event(&self, side: Side, kind: EventKind, time: f64) -> GaitEvent {
        GaitEvent::at_frame(side, kind, (time * self.sample_rate).round() as usize, self.sample_rate, SYNTH_TRUTH_SOURCE)
    }

    /// Events of the numbered cycles only, at frame resolution, sorted.
    pub fn cycle_events(&self) -> Vec<GaitEvent> {
        let mut out = Vec::new();
        for side in Side::BOTH {
            for &(hs, to) in self.cycles(side) {
                out.push(self.event(side, EventKind::HeelStrike, hs));
                out.push(self.event(side, EventKind::ToeOff, to));
            }
        }
        sort_events(&mut out);
        out
    }

    /// Every scheduled event inside the trial, at frame resolution, sorted.
    pub fn events(&self) -> Vec<GaitEvent> {
        let mut out = self.cycle_events();
        out.extend(self.boundary.iter().map(|b| self.event(b.side, b.kind, b.time)));
        sort_events(&mut out);
        out
    }

    pub fn to_result(&self) -> DetectionResult {
        DetectionResult::from_events(SYNTH_TRUTH_SOURCE, self.events())
    }
}

/// Foot state of one side as a function of time.
struct FootModel {
    period: f64,
    stance: f64,
    first_hs: f64,
    speed: f64,
    step_height: f64,
    lateral: f64,
}

impl FootModel {
    /// Heel position at time `t`.
    fn heel(&self, t: f64) -> [f64; 3] {
        let (x, z, _) = self.state(t);
        [x, self.lateral, z]
    }

    fn toe(&self, t: f64) -> [f64; 3] {
        let (x, _, zt) = self.state(t);
        [x + FOOT_LENGTH, self.lateral, zt + TOE_MARKER_HEIGHT]
    }

    /// `(AP position, heel height, toe height above flat)`.
    fn state(&self, t: f64) -> (f64, f64, f64) {
        let stride = self.speed * self.period;
        let k = ((t - self.first_hs) / self.period).floor();
        let hs = self.first_hs + k * self.period;
        let planted = self.speed * hs + HEEL_STRIKE_REACH * stride;
        let into_cycle = t - hs;
        let stance_time = self.stance * self.period;
        if into_cycle <= stance_time {
            return (planted, 0.0, 0.0);
        }
        // Swing from this stance position to the next one.
        let s = (into_cycle - stance_time) / ((1.0 - self.stance) * self.period);
        let x = planted + stride * (s - SWING_EASE * (2.0 * PI * s).sin() / (2.0 * PI));
        let lift = |u: f64| self.step_height * (u - u.powi(HEEL_LIFT_EXPONENT)) / lift_peak();
        (x, lift(s), lift(1.0 - s))
    }
}

/// Maximum of `u - u^p` on [0, 1].
fn lift_peak() -> f64 {
    let p = f64::from(HEEL_LIFT_EXPONENT);
    let u = (1.0 / p).powf(1.0 / (p - 1.0));
    u - u.powi(HEEL_LIFT_EXPONENT)
}

/// Vertical force of one foot: ramps up over [`GRF_RAMP`] from heel strike and down to zero at
/// toe off, zero during swing.
fn grf(t: f64, first_hs: f64, period: f64, stance: f64) -> f64 {
    let k = ((t - first_hs) / period).floor();
    let into = t - (first_hs + k * period);
    let stance_time = stance * period;
    if into > stance_time {
        return 0.0;
    }
    let up = into / GRF_RAMP;
    let down = (stance_time - into) / GRF_RAMP;
    GRF_PLATEAU * up.min(down).clamp(0.0, 1.0)
}

fn pelvis_markers(spec: &SyntheticSpec, t: f64) -> [(&'static str, [f64; 3]); 4] {
    let phase = 2.0 * PI * t / spec.gait_period;
    let x = spec.walking_speed * t;
    let y = PELVIS_SWAY * phase.sin();
    let z = PELVIS_HEIGHT + PELVIS_BOB * (2.0 * phase).sin();
    [
        (LASIS, [x + 0.10, y + 0.12, z]),
        (RASIS, [x + 0.10, y - 0.12, z]),
        (LPSIS, [x - 0.08, y + 0.05, z + 0.02]),
        (RPSIS, [x - 0.08, y - 0.05, z + 0.02]),
    ]
}

/// Builds a normalized trial (progression +X, vertical +Z, meters) and the event schedule it
/// was generated from.
pub fn generate(spec: &SyntheticSpec) -> Result<(Trial, TruthSchedule)> {
    spec.validate()?;
    let n = spec.frame_count();
    let fs = spec.sample_rate;
    let period = spec.gait_period;
    let times: Vec<f64> = (0..n).map(|i| i as f64 / fs).collect();

    let mut markers: Vec<MarkerTrajectory> = Vec::new();
    let pelvis: Vec<_> = times.iter().map(|&t| pelvis_markers(spec, t)).collect();
    for m in 0..4 {
        markers.push(MarkerTrajectory::from_points(pelvis[0][m].0, pelvis.iter().map(|p| p[m].1)));
    }
    let mut grf_channels = Vec::new();
    for side in Side::BOTH {
        let foot = FootModel {
            period,
            stance: spec.stance_fraction,
            first_hs: spec.first_heel_strike(side),
            speed: spec.walking_speed,
            step_height: spec.step_height,
            lateral: if side == Side::Left { FOOT_WIDTH_OFFSET } else { -FOOT_WIDTH_OFFSET },
        };
        markers.push(MarkerTrajectory::from_points(heel_marker(side), times.iter().map(|&t| foot.heel(t))));
        markers.push(MarkerTrajectory::from_points(toe_marker(side), times.iter().map(|&t| foot.toe(t))));
        grf_channels.push(times.iter().map(|&t| grf(t, foot.first_hs, period, spec.stance_fraction)).collect::<Vec<f64>>());
    }

    if spec.noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_std).map_err(|e| Error::Parameter(e.to_string()))?;
        markers.sort_by(|a, b| a.name.cmp(&b.name));
        for m in &mut markers {
            for p in m.samples.iter_mut().flatten() {
                for v in p.iter_mut() {
                    *v += normal.sample(&mut rng);
                }
            }
        }
    }

    let right = grf_channels.pop();
    let left = grf_channels.pop();
    let trial = Trial::new(format!("synth_{}", spec.seed), fs, markers, left, right, CoordinateFrame::NORMALIZED)?;
    Ok((trial, schedule(spec)))
}

fn schedule(spec: &SyntheticSpec) -> TruthSchedule {
    let period = spec.gait_period;
    let stance = spec.stance_fraction * period;
    let end = (spec.frame_count().saturating_sub(1)) as f64 / spec.sample_rate;
    let mut cycles = [Vec::new(), Vec::new()];
    let mut boundary = Vec::new();
    for (slot, side) in Side::BOTH.into_iter().enumerate() {
        let first = spec.first_heel_strike(side);
        cycles[slot] = (0..spec.n_cycles)
            .map(|i| {
                let hs = first + i as f64 * period;
                (hs, hs + stance)
            })
            .collect();
        // Partial cycles on either side of the numbered ones.
        let before = ((first / period).ceil() as i64).max(1);
        for k in -before..=(spec.n_cycles as i64 + 1) {
            let hs = first + k as f64 * period;
            let numbered = (0..spec.n_cycles as i64).contains(&k);
            for (kind, t) in [(EventKind::HeelStrike, hs), (EventKind::ToeOff, hs + stance)] {
                if !numbered && t > 0.0 && t < end {
                    boundary.push(ScheduledEvent { side, kind, time: t });
                }
            }
        }
    }
    let [left, right] = cycles;
    TruthSchedule { left, right, boundary, sample_rate: spec.sample_rate }
}
