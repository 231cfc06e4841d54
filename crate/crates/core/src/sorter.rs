//! Insertion sort driven by interpolation: each new key's slot is predicted
//! from the rate of change of the sorted keys between two boundaries, and
//! a wrong prediction becomes the new boundary for the next attempt.

use thiserror::Error;

/// Counters gathered while sorting.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SortStats {
    /// Slot predictions made, over all insertions.
    pub probes: usize,
    /// Key comparisons made, over all insertions.
    pub comparisons: usize,
    /// Keys whose heuristic insertion failed, with the reason. With the
    /// fallback enabled these were placed by a linear scan instead.
    pub failures: Vec<(f64, String)>,
    /// Iterations spent on each key, in input order.
    pub per_element_iters: Vec<usize>,
    /// Largest per-insertion probe count divided by the length of the
    /// sorted run at that moment plus one. Never exceeds 1.
    pub max_probe_ratio: f64,
}

/// A successful heuristic insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    /// Insert before `keys[slot]`; `keys.len()` appends.
    pub slot: usize,
    pub iterations: usize,
    pub probes: usize,
    pub comparisons: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no verified slot after {iterations} iterations")]
pub struct Failure {
    pub iterations: usize,
    pub probes: usize,
    pub comparisons: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SortError {
    #[error("key {0} is not a finite number")]
    NonFinite(f64),
    #[error("heuristic insertion of {element} failed: {failure}")]
    Aborted { element: f64, failure: Failure },
}

/// Predicts where `v` goes between `keys[lo]` and `keys[hi]`, assuming the
/// keys grow at a constant rate across that segment.
///
/// The returned slot lies in `lo + 1..=hi` and means "insert before
/// `keys[slot]`". A key equal to `keys[lo]` lands right after it. A flat
/// segment predicts its midpoint.
pub fn predict_index(keys: &[f64], lo: usize, hi: usize, v: f64) -> usize {
    debug_assert!(lo < hi && hi < keys.len());
    let rate = (keys[hi] - keys[lo]) / (hi - lo) as f64;
    if rate > 0.0 {
        let offset = ((v - keys[lo]) / rate).floor();
        if offset < 0.0 {
            lo + 1
        } else {
            // Saturating float-to-int cast, then clamp into (lo, hi].
            (lo + 1).saturating_add(offset as usize).min(hi)
        }
    } else {
        (lo + hi).div_ceil(2)
    }
}

/// Finds the stable insertion slot of `v` in the ascending `keys`.
///
/// The first iteration settles keys outside `[keys[0], keys[last])` with
/// two boundary comparisons; otherwise each iteration predicts a slot with
/// [`predict_index`] and checks its neighbours. A wrong guess shrinks the
/// segment to the side holding `v`, with the guess as the new boundary, so
/// no more than `keys.len()` iterations are ever needed. Running out of
/// `max_iters` first is a [`Failure`].
pub fn heuristic_insert(keys: &[f64], v: f64, max_iters: usize) -> Result<Placement, Failure> {
    let mut probes = 0;
    let mut comparisons = 0;
    let fail = |iterations, probes, comparisons| Failure {
        iterations,
        probes,
        comparisons,
    };
    if max_iters == 0 {
        return Err(fail(0, 0, 0));
    }
    let n = keys.len();
    let done = |slot, iterations, probes, comparisons| {
        Ok(Placement {
            slot,
            iterations,
            probes,
            comparisons,
        })
    };
    if n == 0 {
        return done(0, 1, 0, 0);
    }
    comparisons += 1;
    if v < keys[0] {
        return done(0, 1, probes, comparisons);
    }
    comparisons += 1;
    if v >= keys[n - 1] {
        return done(n, 1, probes, comparisons);
    }

    // keys[lo] <= v < keys[hi], so the answer lies in lo + 1..=hi.
    let (mut lo, mut hi) = (0, n - 1);
    let mut iterations = 1;
    loop {
        let slot = predict_index(keys, lo, hi, v);
        probes += 1;
        comparisons += 1;
        if keys[slot - 1] > v {
            hi = slot - 1;
        } else {
            comparisons += 1;
            if v < keys[slot] {
                return done(slot, iterations, probes, comparisons);
            }
            lo = slot;
        }
        if iterations == max_iters {
            return Err(fail(iterations, probes, comparisons));
        }
        iterations += 1;
    }
}

/// Stable slot by linear scan, used when the heuristic gives up.
fn linear_slot(keys: &[f64], v: f64) -> (usize, usize) {
    let slot = keys.iter().position(|k| *k > v).unwrap_or(keys.len());
    (slot, slot + 1)
}

/// Sorts `items` by inserting them one at a time with [`heuristic_insert`].
///
/// `max_iters` caps the iterations per insertion; `None` allows the length
/// of the sorted run plus one, which never fails. On a failed insertion the
/// key is placed by linear scan when `fallback` is set, and the sort is
/// aborted otherwise.
pub fn heuristic_sort(
    items: &[f64],
    fallback: bool,
    max_iters: Option<usize>,
) -> Result<(Vec<f64>, SortStats), SortError> {
    if let Some(bad) = items.iter().find(|v| !v.is_finite()) {
        return Err(SortError::NonFinite(*bad));
    }
    let mut sorted: Vec<f64> = Vec::with_capacity(items.len());
    let mut stats = SortStats::default();
    for &v in items {
        let limit = max_iters.unwrap_or(sorted.len() + 1);
        let slot = match heuristic_insert(&sorted, v, limit) {
            Ok(p) => {
                stats.probes += p.probes;
                stats.comparisons += p.comparisons;
                stats.per_element_iters.push(p.iterations);
                stats.max_probe_ratio = stats
                    .max_probe_ratio
                    .max(p.probes as f64 / (sorted.len() + 1) as f64);
                p.slot
            }
            Err(failure) if fallback => {
                stats.probes += failure.probes;
                stats.comparisons += failure.comparisons;
                stats.per_element_iters.push(failure.iterations);
                stats.failures.push((v, failure.to_string()));
                let (slot, scanned) = linear_slot(&sorted, v);
                stats.comparisons += scanned;
                slot
            }
            Err(failure) => return Err(SortError::Aborted { element: v, failure }),
        };
        sorted.insert(slot, v);
    }
    Ok((sorted, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stable slot by binary search: after every key `<= v`.
    fn reference_slot(keys: &[f64], v: f64) -> usize {
        keys.partition_point(|k| *k <= v)
    }

    #[test]
    fn predict_examples() {
        let keys = [10.0, 20.0, 30.0, 40.0];
        assert_eq!(predict_index(&keys, 0, 3, 25.0), 2);
        assert_eq!(predict_index(&keys, 0, 3, 25.0), reference_slot(&keys, 25.0));
        assert_eq!(predict_index(&keys, 0, 3, 10.0), 1);
        assert_eq!(predict_index(&keys, 0, 3, -100.0), 1);
        assert_eq!(predict_index(&keys, 0, 3, 1e300), 3);
    }

    #[test]
    fn flat_segment_predicts_midpoint() {
        let keys = [5.0, 5.0, 5.0];
        for v in [4.0, 5.0, 6.0] {
            assert_eq!(predict_index(&keys, 0, 2, v), 1);
        }
        // The full insertion still lands where a linear scan puts it.
        assert_eq!(heuristic_insert(&keys, 5.0, 3).unwrap().slot, 3);
        let keys = [1.0, 5.0, 5.0, 5.0, 5.0, 9.0];
        assert_eq!(heuristic_insert(&keys, 5.0, 6).unwrap().slot, linear_slot(&keys, 5.0).0);
    }

    #[test]
    fn arithmetic_keys_take_one_iteration() {
        let keys: Vec<f64> = (1..=10).map(|i| i as f64 * 10.0).collect();
        let p = heuristic_insert(&keys, 55.0, 10).unwrap();
        assert_eq!(p.slot, reference_slot(&keys, 55.0));
        assert_eq!((p.iterations, p.probes), (1, 1));
    }

    #[test]
    fn zero_iterations_fail() {
        let keys = [1.0, 2.0, 3.0];
        assert_eq!(heuristic_insert(&keys, 2.5, 0).unwrap_err().iterations, 0);
    }

    #[test]
    fn edges_resolve_at_boundaries() {
        let keys = [1.0, 2.0, 3.0];
        assert_eq!(heuristic_insert(&keys, 0.0, 1).unwrap().slot, 0);
        assert_eq!(heuristic_insert(&keys, 3.0, 1).unwrap().slot, 3);
        assert_eq!(heuristic_insert(&[], 3.0, 1).unwrap().slot, 0);
        assert_eq!(heuristic_insert(&[7.0], 7.0, 1).unwrap().slot, 1);
    }

    #[test]
    fn skewed_keys_need_more_iterations() {
        let keys = [0.0, 1.0, 2.0, 3.0, 4.0, 1000.0];
        let p = heuristic_insert(&keys, 3.5, 6).unwrap();
        assert_eq!(p.slot, 4);
        assert!(p.iterations > 1);
        assert!(heuristic_insert(&keys, 3.5, 1).is_err());
    }

    #[test]
    fn sort_small() {
        let (out, stats) = heuristic_sort(&[3.0, 1.0, 2.0], false, None).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 3.0]);
        assert!(stats.failures.is_empty());
        assert_eq!(stats.per_element_iters.len(), 3);
    }

    #[test]
    fn sort_rejects_non_finite() {
        assert_eq!(
            heuristic_sort(&[1.0, f64::NAN], true, None).unwrap_err().to_string(),
            "key NaN is not a finite number"
        );
        assert!(heuristic_sort(&[f64::INFINITY], true, None).is_err());
    }

    #[test]
    fn fallback_and_abort() {
        let items = [0.0, 1.0, 2.0, 3.0, 4.0, 1000.0, 3.5];
        let (out, stats) = heuristic_sort(&items, true, Some(1)).unwrap();
        assert_eq!(out, vec![0.0, 1.0, 2.0, 3.0, 3.5, 4.0, 1000.0]);
        assert_eq!(stats.failures.len(), 1);
        assert_eq!(stats.failures[0].0, 3.5);
        let err = heuristic_sort(&items, false, Some(1)).unwrap_err();
        assert!(matches!(err, SortError::Aborted { element, .. } if element == 3.5));
    }

    #[test]
    fn already_sorted_input_appends() {
        let items: Vec<f64> = (0..200).map(|i| (i * i) as f64).collect();
        let (out, stats) = heuristic_sort(&items, false, None).unwrap();
        assert_eq!(out, items);
        assert!(stats.per_element_iters.iter().all(|&i| i == 1));
    }
}
