//! Numerical kernels over uniformly sampled series.

mod context;
mod crossings;
mod diff;
mod extrema;
mod filter;

use crate::error::{Error, Result};
use crate::scalar::{quantile_sorted, Scalar};

pub use context::{dominant_period, estimate_gait_context, GaitContext, MAX_GAIT_PERIOD, MIN_AUTOCORRELATION_PEAK, MIN_GAIT_PERIOD};
pub use crossings::{all_crossings, debounce_samples, threshold_crossings, Direction};
pub use extrema::{find_extrema, local_extrema, Extremum, ExtremumKind};
pub use filter::{butterworth_sos, butterworth_zero_phase, Biquad, FilterKind};
pub use diff::derivative;

/// Uniformly sampled finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T: Scalar = f64> {
    pub values: Vec<T>,
    pub sample_rate: f64,
}

impl<T: Scalar> Series<T> {
    pub fn new(values: Vec<T>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Parameter(format!("sample rate must be > 0, got {sample_rate}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("non-finite sample at index {i}")));
        }
        Ok(Series { values, sample_rate })
    }

    /// Builds a series from `f(t)` sampled at `t = i / sample_rate`.
    pub fn from_fn(len: usize, sample_rate: f64, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..len).map(|i| T::lit(f(i as f64 / sample_rate))).collect();
        Series { values, sample_rate }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Series { values: self.values.iter().copied().map(f).collect(), sample_rate: self.sample_rate }
    }

    /// Element-wise combination of two equally long series.
    pub fn zip_with(&self, other: &Series<T>, f: impl Fn(T, T) -> T) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Series { values, sample_rate: self.sample_rate }
    }
}

/// Default extremum prominence: 10% of the interquartile range of the values.
pub fn adaptive_prominence<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite series"));
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    iqr * T::lit(0.1)
}
