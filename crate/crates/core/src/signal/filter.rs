//! Butterworth design as cascaded second-order sections and forward-backward application.

use std::f64::consts::PI;

use super::Series;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lowpass,
    Highpass,
}

/// Normalized section `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// Transposed direct form II state that holds output steady for a constant unit input.
    fn steady_state(&self) -> [f64; 2] {
        let y = self.dc_gain();
        let s2 = self.b[2] - self.a[1] * y;
        let s1 = self.b[1] - self.a[0] * y + s2;
        [s1, s2]
    }
}

/// Digital Butterworth sections via the bilinear transform with frequency pre-warping.
pub fn butterworth_sos(order: usize, cutoff: f64, sample_rate: f64, kind: FilterKind) -> Result<Vec<Biquad>> {
    if order == 0 {
        return Err(Error::Parameter("filter order must be >= 1".into()));
    }
    let nyquist = sample_rate / 2.0;
    if !(cutoff > 0.0 && cutoff < nyquist) {
        return Err(Error::Parameter(format!("cutoff {cutoff} Hz outside (0, {nyquist}) Hz")));
    }
    let w = (PI * cutoff / sample_rate).tan();
    let w2 = w * w;
    let mut sections = Vec::with_capacity(order.div_ceil(2));
    for k in 0..order / 2 {
        // Damping of the k-th conjugate pole pair of the analog prototype.
        let zeta = (PI * (2 * k + 1) as f64 / (2 * order) as f64).sin();
        let a0 = 1.0 + 2.0 * zeta * w + w2;
        let a = [2.0 * (w2 - 1.0) / a0, (1.0 - 2.0 * zeta * w + w2) / a0];
        let b = match kind {
            FilterKind::Lowpass => [w2 / a0, 2.0 * w2 / a0, w2 / a0],
            FilterKind::Highpass => [1.0 / a0, -2.0 / a0, 1.0 / a0],
        };
        sections.push(Biquad { b, a });
    }
    if order % 2 == 1 {
        let a0 = 1.0 + w;
        let a = [(w - 1.0) / a0, 0.0];
        let b = match kind {
            FilterKind::Lowpass => [w / a0, w / a0, 0.0],
            FilterKind::Highpass => [1.0 / a0, -1.0 / a0, 0.0],
        };
        sections.push(Biquad { b, a });
    }
    Ok(sections)
}

struct Section<T> {
    b: [T; 3],
    a: [T; 2],
    zi: [T; 2],
}

/// Runs the cascade over `x` in place, starting every section at its steady state for a
/// constant input equal to `x[0]`.
fn cascade<T: Scalar>(sections: &[Section<T>], x: &mut [T]) {
    let mut level = x[0];
    for s in sections {
        let mut z1 = s.zi[0] * level;
        let mut z2 = s.zi[1] * level;
        for v in x.iter_mut() {
            let input = *v;
            let y = s.b[0] * input + z1;
            z1 = s.b[1] * input - s.a[0] * y + z2;
            z2 = s.b[2] * input - s.a[1] * y;
            *v = y;
        }
        // The next section sees this section's steady output level.
        level = level * (s.b[0] + s.b[1] + s.b[2]) / (T::one() + s.a[0] + s.a[1]);
    }
}

/// Edge padding length, capped by the series length.
fn pad_len(len: usize, order: usize, cutoff: f64, sample_rate: f64) -> usize {
    let settle = (3.0 * sample_rate / cutoff).ceil() as usize;
    (3 * order).max(settle).min(len - 1)
}

/// Zero-phase Butterworth filtering: `order`-th order filter run forward then backward.
///
/// The series is extended at both ends by point reflection about its end samples before
/// filtering and cropped afterwards. Output length equals input length.
pub fn butterworth_zero_phase<T: Scalar>(s: &Series<T>, cutoff: f64, kind: FilterKind, order: usize) -> Result<Series<T>> {
    let sos = butterworth_sos(order, cutoff, s.sample_rate, kind)?;
    let n = s.len();
    if n <= 3 * order {
        return Err(Error::Length { min: 3 * order, len: n });
    }
    let sections: Vec<Section<T>> = sos
        .iter()
        .map(|q| Section { b: q.b.map(T::lit), a: q.a.map(T::lit), zi: q.steady_state().map(T::lit) })
        .collect();

    let pad = pad_len(n, order, cutoff, s.sample_rate);
    let x = &s.values;
    let two = T::lit(2.0);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| two * x[0] - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| two * x[n - 1] - x[n - 1 - i]));

    cascade(&sections, &mut ext);
    ext.reverse();
    cascade(&sections, &mut ext);
    ext.reverse();

    Ok(Series { values: ext[pad..pad + n].to_vec(), sample_rate: s.sample_rate })
}
