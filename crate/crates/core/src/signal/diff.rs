use super::Series;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// First time derivative: central differences inside, second-order one-sided stencils at the ends.
pub fn derivative<T: Scalar>(s: &Series<T>) -> Result<Series<T>> {
    let x = &s.values;
    let n = x.len();
    if n < 3 {
        return Err(Error::Length { min: 2, len: n });
    }
    let half_fs = T::lit(s.sample_rate / 2.0);
    let four = T::lit(4.0);
    let mut d = Vec::with_capacity(n);
    // Written in differences so constant input gives exactly zero.
    d.push((four * (x[1] - x[0]) - (x[2] - x[0])) * half_fs);
    d.extend(x.windows(3).map(|w| (w[2] - w[0]) * half_fs));
    d.push((four * (x[n - 1] - x[n - 2]) - (x[n - 1] - x[n - 3])) * half_fs);
    Ok(Series { values: d, sample_rate: s.sample_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ramp_has_unit_slope() {
        let s: Series = Series::from_fn(50, 200.0, |t| t);
        let d = derivative(&s).unwrap();
        assert!(d.values.iter().all(|v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn constant_has_zero_slope() {
        let d = derivative(&Series::new(vec![7.5f32; 10], 100.0).unwrap()).unwrap();
        assert!(d.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sine_amplitude_within_tenth_percent() {
        let f = 1.0;
        let s = Series::from_fn(400, 200.0, |t| (2.0 * PI * f * t).sin());
        let d = derivative(&s).unwrap();
        // d/dt sin(2 pi f t) = 2 pi f cos(2 pi f t); compare the interior pointwise.
        let expected = 2.0 * PI * f;
        for (i, v) in d.values.iter().enumerate().take(399).skip(1) {
            let t = i as f64 / 200.0;
            assert!((v - expected * (2.0 * PI * f * t).cos()).abs() <= 1e-3 * expected);
        }
        let peak = d.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((peak - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn too_short() {
        assert!(matches!(derivative(&Series::new(vec![1.0, 2.0], 10.0).unwrap()), Err(Error::Length { .. })));
    }
}
