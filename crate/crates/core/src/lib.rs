//! Kinematic gait event detection: heel strike and toe off from marker trajectories,
//! force-plate reference events, temporal-error evaluation and a synthetic walking oracle.
//!
//! Per-sample data is generic over [`Scalar`] (`f32` or `f64`); the aliases below name the
//! concrete instantiations.

pub mod cli;
pub mod compare;
pub mod config;
pub mod detectors;
pub mod error;
pub mod evaluation;
pub mod events;
pub mod ground_truth;
pub mod scalar;
pub mod signal;
pub mod synth;
pub mod trial;

pub use config::DetectorConfig;
pub use detectors::{detect, detect_method, Method, METHOD_IDS};
pub use error::{Error, Result};
pub use evaluation::{evaluate, match_events, summarize, EvaluationReport};
pub use events::{DetectionResult, EventKind, GaitEvent, Side};
pub use ground_truth::events_from_grf;
pub use scalar::{Scalar, Vec3};
pub use signal::{estimate_gait_context, GaitContext};
pub use synth::{generate, SyntheticSpec, TruthSchedule};
pub use trial::{load_trial, normalize_coordinates, LoadOptions, MarkerTrajectory, Trial};

pub type Trial32 = trial::Trial<f32>;
pub type Trial64 = trial::Trial<f64>;
pub type MarkerTrajectory32 = trial::MarkerTrajectory<f32>;
pub type MarkerTrajectory64 = trial::MarkerTrajectory<f64>;
pub type Series32 = signal::Series<f32>;
pub type Series64 = signal::Series<f64>;
