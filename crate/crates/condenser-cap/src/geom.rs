//! Small Euclidean helpers shared across modules.

/// Squared Euclidean distance. Both slices must have equal length.
#[inline]
pub(crate) fn dist2(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = 0.0;
    for (a, b) in x.iter().zip(y.iter()) {
        let d = a - b;
        s += d * d;
    }
    s
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Minimum pairwise distance within a point list; +inf for fewer than 2 points.
pub(crate) fn min_pairwise_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (k, p) in points.iter().enumerate() {
        for q in points.iter().skip(k + 1) {
            let d = dist2(p, q);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

/// Minimum distance between two point lists; +inf if either is empty.
pub(crate) fn min_cross_distance(a: &[&Vec<f64>], b: &[&Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for p in a {
        for q in b {
            let d = dist2(p, q);
            if d < best {
                best = d;
            }
        }
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist2_matches_hand_computation() {
        assert_eq!(dist2(&[0.0, 0.0], &[3.0, 4.0]), 25.0);
        assert_eq!(dist2(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
    }

    #[test]
    fn min_pairwise_handles_degenerate_lists() {
        assert!(min_pairwise_distance(&[]).is_infinite());
        assert!(min_pairwise_distance(&[vec![1.0, 0.0]]).is_infinite());
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.25]];
        assert_eq!(min_pairwise_distance(&pts), 0.25);
    }
}
