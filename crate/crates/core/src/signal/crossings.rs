use super::Series;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// From at-or-below the threshold to strictly above it.
    Rising,
    /// From at-or-above the threshold to strictly below it.
    Falling,
}

/// Number of consecutive samples a crossing must hold for: `debounce` seconds, at least one.
pub fn debounce_samples(debounce: f64, sample_rate: f64) -> usize {
    ((debounce * sample_rate - 1e-9).ceil().max(1.0)) as usize
}

/// All debounced crossings of `threshold`, alternating in direction.
///
/// The series starts in the "above" state when its first sample is strictly above the
/// threshold. A crossing is reported at the first sample strictly beyond the threshold on the
/// other side, provided the following samples stay strictly beyond it for the debounce length.
/// A run cut short by the end of the series is not a crossing.
pub fn all_crossings<T: Scalar>(s: &Series<T>, threshold: T, debounce: f64) -> Vec<(usize, Direction)> {
    let x = &s.values;
    let n = x.len();
    let m = debounce_samples(debounce, s.sample_rate);
    let mut out = Vec::new();
    let Some(first) = x.first() else {
        return out;
    };
    let mut above = *first > threshold;
    let mut i = 1;
    while i < n {
        let beyond = |v: T| if above { v < threshold } else { v > threshold };
        if beyond(x[i]) && i + m <= n && x[i..i + m].iter().all(|&v| beyond(v)) {
            out.push((i, if above { Direction::Falling } else { Direction::Rising }));
            above = !above;
            i += m;
            continue;
        }
        i += 1;
    }
    out
}

/// Debounced crossings of `threshold` in one direction. See [`all_crossings`].
pub fn threshold_crossings<T: Scalar>(s: &Series<T>, threshold: T, direction: Direction, debounce: f64) -> Vec<usize> {
    all_crossings(s, threshold, debounce).into_iter().filter(|c| c.1 == direction).map(|c| c.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn debounce_length() {
        assert_eq!(debounce_samples(0.05, 200.0), 10);
        assert_eq!(debounce_samples(0.0, 200.0), 1);
        assert_eq!(debounce_samples(0.051, 200.0), 11);
    }

    #[test]
    fn ramp_crosses_once_at_midpoint() {
        let s = Series::from_fn(101, 100.0, |t| t);
        let r = threshold_crossings(&s, 0.5, Direction::Rising, 0.05);
        assert_eq!(r.len(), 1);
        assert!(r[0].abs_diff(50) <= 1);
        assert!(threshold_crossings(&s, 0.5, Direction::Falling, 0.05).is_empty());
    }

    #[test]
    fn constantly_above_has_no_rising() {
        let s = Series::new(vec![2.0; 50], 200.0).unwrap();
        assert!(threshold_crossings(&s, 1.0, Direction::Rising, 0.05).is_empty());
    }

    #[test]
    fn chatter_is_debounced() {
        // 200 Hz: below for 20 samples, then five crossings within 4 samples (20 ms),
        // then above for 40 samples.
        let mut v = vec![0.0; 20];
        v.extend([1.0, 0.0, 1.0, 0.0]);
        v.extend(vec![1.0; 40]);
        let s = Series::new(v, 200.0).unwrap();
        let all = all_crossings(&s, 0.5, 0.05);
        assert_eq!(all, vec![(24, Direction::Rising)]);
    }

    #[test]
    fn truncated_run_is_not_a_crossing() {
        let mut v = vec![0.0; 20];
        v.extend(vec![1.0; 9]);
        let s = Series::new(v, 200.0).unwrap();
        assert!(all_crossings(&s, 0.5, 0.05).is_empty());
    }

    #[test]
    fn directions_alternate() {
        let s = Series::from_fn(1000, 200.0, |t| (2.0 * std::f64::consts::PI * t).sin());
        let all = all_crossings(&s, 0.0, 0.05);
        assert!(all.len() >= 8);
        assert_eq!(all[0].1, Direction::Rising);
        assert!(all.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0));
    }
}
