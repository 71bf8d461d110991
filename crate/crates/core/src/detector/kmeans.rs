//! Two-cluster k-means over scalar distance scores.

/// Result of clustering: the final centroids (low, high) and per-value
/// membership in the high cluster.
#[derive(Debug, Clone)]
pub struct KMeans1d {
    pub centroid_lo: f64,
    pub centroid_hi: f64,
    pub in_hi_cluster: Vec<bool>,
    /// All inputs were identical; no meaningful split exists.
    pub degenerate: bool,
}

/// k = 2 k-means with centroids seeded at the minimum and maximum values,
/// at most `max_iter` iterations, convergence at centroid movement below
/// `tol`.
pub fn kmeans2(values: &[f64], max_iter: usize, tol: f64) -> KMeans1d {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() || (max - min).abs() < 1e-15 {
        return KMeans1d {
            centroid_lo: min,
            centroid_hi: max,
            in_hi_cluster: vec![false; values.len()],
            degenerate: true,
        };
    }

    let mut lo = min;
    let mut hi = max;
    let mut membership = vec![false; values.len()];
    for _ in 0..max_iter {
        for (value, is_hi) in values.iter().zip(membership.iter_mut()) {
            *is_hi = (value - hi).abs() < (value - lo).abs();
        }
        let mut sum_lo = 0.0;
        let mut n_lo = 0usize;
        let mut sum_hi = 0.0;
        let mut n_hi = 0usize;
        for (value, is_hi) in values.iter().zip(membership.iter()) {
            if *is_hi {
                sum_hi += value;
                n_hi += 1;
            } else {
                sum_lo += value;
                n_lo += 1;
            }
        }
        let new_lo = if n_lo > 0 { sum_lo / n_lo as f64 } else { lo };
        let new_hi = if n_hi > 0 { sum_hi / n_hi as f64 } else { hi };
        let moved = (new_lo - lo).abs().max((new_hi - hi).abs());
        lo = new_lo;
        hi = new_hi;
        if moved < tol {
            break;
        }
    }
    // Stable orientation: the cluster holding the smaller centroid is "lo".
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
        for is_hi in &mut membership {
            *is_hi = !*is_hi;
        }
    }
    KMeans1d {
        centroid_lo: lo,
        centroid_hi: hi,
        in_hi_cluster: membership,
        degenerate: false,
    }
}
