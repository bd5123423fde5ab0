use std::cmp::Ordering;

use super::Series;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub index: usize,
    pub value: T,
    /// Height above the higher of the two surrounding bases (depth for minima).
    pub prominence: T,
}

/// Indices of strict local extrema with at least `prominence`, at least `min_separation` frames
/// apart. See [`find_extrema`].
pub fn local_extrema<T: Scalar>(s: &Series<T>, kind: ExtremumKind, min_separation: usize, prominence: T) -> Vec<usize> {
    find_extrema(&s.values, kind, min_separation, prominence).into_iter().map(|e| e.index).collect()
}

/// Strict local extrema of `values`.
///
/// A flat run is one extremum, reported at its middle frame (lower middle for even runs), when
/// both neighbours of the run are strictly lower (maxima) or higher (minima). Runs touching
/// either end of the series are not extrema. Candidates below `prominence` are dropped; among
/// the rest, any candidate closer than `min_separation` frames to a more extreme one is dropped
/// (equal values: the earlier wins). Output is sorted by index.
pub fn find_extrema<T: Scalar>(values: &[T], kind: ExtremumKind, min_separation: usize, prominence: T) -> Vec<Extremum<T>> {
    let oriented: Vec<T> = match kind {
        ExtremumKind::Max => values.to_vec(),
        ExtremumKind::Min => values.iter().map(|v| -*v).collect(),
    };
    let peaks = plateau_peaks(&oriented);
    let mut found: Vec<Extremum<T>> = peaks
        .into_iter()
        .map(|p| Extremum { index: p, value: oriented[p], prominence: peak_prominence(&oriented, p) })
        .filter(|e| e.prominence >= prominence)
        .collect();

    if min_separation > 1 && found.len() > 1 {
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by(|&a, &b| {
            found[b].value.partial_cmp(&found[a].value).unwrap_or(Ordering::Equal).then(found[a].index.cmp(&found[b].index))
        });
        let mut keep = vec![true; found.len()];
        for &i in &order {
            if !keep[i] {
                continue;
            }
            let idx = found[i].index;
            // Neighbours in index order; stop once outside the window.
            for j in (0..i).rev() {
                if idx - found[j].index >= min_separation {
                    break;
                }
                keep[j] = false;
            }
            for j in i + 1..found.len() {
                if found[j].index - idx >= min_separation {
                    break;
                }
                keep[j] = false;
            }
        }
        let mut k = 0;
        found.retain(|_| {
            k += 1;
            keep[k - 1]
        });
    }

    if kind == ExtremumKind::Min {
        for e in &mut found {
            e.value = -e.value;
        }
    }
    found
}

fn plateau_peaks<T: Scalar>(x: &[T]) -> Vec<usize> {
    let n = x.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i] > x[i - 1] {
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < n && x[j + 1] < x[i] {
                peaks.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn peak_prominence<T: Scalar>(x: &[T], p: usize) -> T {
    let v = x[p];
    let mut left_min = v;
    for &y in x[..p].iter().rev() {
        if y > v {
            break;
        }
        if y < left_min {
            left_min = y;
        }
    }
    let mut right_min = v;
    for &y in &x[p + 1..] {
        if y > v {
            break;
        }
        if y < right_min {
            right_min = y;
        }
    }
    v - left_min.max(right_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_maxima() {
        let s = Series::from_fn(300, 100.0, |t| (2.0 * PI * t).sin());
        let m = local_extrema(&s, ExtremumKind::Max, 1, 0.0);
        assert_eq!(m.len(), 3);
        for (got, want) in m.iter().zip([25usize, 125, 225]) {
            assert!(got.abs_diff(want) <= 1);
        }
    }

    #[test]
    fn monotone_ramp_has_none() {
        let s = Series::from_fn(50, 100.0, |t| 3.0 * t);
        assert!(local_extrema(&s, ExtremumKind::Max, 1, 0.0).is_empty());
        assert!(local_extrema(&s, ExtremumKind::Min, 1, 0.0).is_empty());
    }

    #[test]
    fn plateau_reported_once_at_lower_middle() {
        let v = [0.0, 1.0, 2.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let e = find_extrema(&v, ExtremumKind::Max, 1, 0.0);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].index, 3);
        // A plateau running into the end is not a peak.
        assert!(find_extrema(&[0.0, 1.0, 1.0], ExtremumKind::Max, 1, 0.0).is_empty());
    }

    #[test]
    fn prominence_and_separation() {
        let v = [0.0, 5.0, 4.0, 4.5, 0.0, 3.0, 0.0];
        let all = find_extrema(&v, ExtremumKind::Max, 1, 0.0);
        assert_eq!(all.iter().map(|e| e.index).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(all[1].prominence, 0.5);
        assert_eq!(all[2].prominence, 3.0);
        let prominent = find_extrema(&v, ExtremumKind::Max, 1, 1.0);
        assert_eq!(prominent.iter().map(|e| e.index).collect::<Vec<_>>(), vec![1, 5]);
        let spaced = find_extrema(&v, ExtremumKind::Max, 3, 0.0);
        assert_eq!(spaced.iter().map(|e| e.index).collect::<Vec<_>>(), vec![1, 5]);
        let wide = find_extrema(&v, ExtremumKind::Max, 5, 0.0);
        assert_eq!(wide.iter().map(|e| e.index).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn minima_report_original_values() {
        let v = [1.0, -2.0, 1.0];
        let e = find_extrema(&v, ExtremumKind::Min, 1, 0.0);
        assert_eq!(e[0].value, -2.0);
        assert_eq!(e[0].prominence, 3.0);
    }
}
