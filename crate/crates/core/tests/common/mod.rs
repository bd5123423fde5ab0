#![allow(dead_code)]

use gaitevents::evaluation::{default_window, match_events, Matching};
use gaitevents::synth::{generate, SyntheticSpec, TruthSchedule};
use gaitevents::{GaitEvent, Trial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded walking specs with period in [1.0, 1.3] s and speed in [0.9, 1.4] m/s.
pub fn suite_specs(n: usize, noise_std: f64) -> Vec<SyntheticSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..n)
        .map(|i| SyntheticSpec {
            n_cycles: 10,
            gait_period: rng.random_range(1.0..=1.3),
            walking_speed: rng.random_range(0.9..=1.4),
            noise_std,
            seed: i as u64,
            ..SyntheticSpec::default()
        })
        .collect()
}

pub fn suite(n: usize, noise_std: f64) -> Vec<(Trial, TruthSchedule)> {
    suite_specs(n, noise_std).iter().map(|s| generate(s).expect("valid spec")).collect()
}

/// Matches against `truth` with the default window, labelled with `trial`.
pub fn matched(trial: &str, truth: &[GaitEvent], pred: &[GaitEvent]) -> Matching {
    match_events(truth, pred, default_window(truth)).with_trial(trial)
}
