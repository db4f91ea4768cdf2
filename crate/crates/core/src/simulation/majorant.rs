//! Linearity segments of the least concave majorant of a Gaussian walk.

use rand::Rng;
use rand_distr::StandardNormal;

use super::report::{counts_from_histogram, z_test, SimReport};
use crate::chambers::Family;
use crate::combinatorics::intrinsic_volume_row;
use crate::error::Result;
use crate::parallel::{sharded_histogram, Parallelism};

/// Relative cross-product tolerance below which three hull points count as
/// collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Indices of the upper convex hull of `(i, walk[i])`, left to right.
///
/// Points on (or numerically on) a hull edge are dropped, so consecutive
/// hull slopes are strictly decreasing.
pub fn upper_hull(walk: &[f64]) -> Vec<usize> {
    let scale = 1.0 + walk.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = COLLINEAR_TOL * scale * walk.len().max(1) as f64;
    let mut hull: Vec<usize> = Vec::with_capacity(walk.len());
    for (i, &y) in walk.iter().enumerate() {
        while let [.., o, a] = hull[..] {
            let (ox, oy) = (o as f64, walk[o]);
            let (ax, ay) = (a as f64, walk[a]);
            let cross = (ax - ox) * (y - oy) - (ay - oy) * (i as f64 - ox);
            // `cross >= 0`: `a` lies on or below the chord from `o` to `i`.
            if cross < -tol {
                break;
            }
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

/// Slopes of the hull edges.
pub fn hull_slopes(walk: &[f64], hull: &[usize]) -> Vec<f64> {
    hull.windows(2)
        .map(|w| (walk[w[1]] - walk[w[0]]) / (w[1] - w[0]) as f64)
        .collect()
}

/// Value of the piecewise-linear majorant at integer abscissa `i`.
pub fn majorant_at(walk: &[f64], hull: &[usize], i: usize) -> f64 {
    let j = hull.partition_point(|&h| h < i);
    if hull[j] == i {
        return walk[i];
    }
    let (a, b) = (hull[j - 1], hull[j]);
    walk[a] + (walk[b] - walk[a]) * (i - a) as f64 / (b - a) as f64
}

/// Number of linearity segments of the concave majorant of `S_0 = 0, S_1..S_n`.
pub fn segment_count(walk: &[f64]) -> usize {
    upper_hull(walk).len() - 1
}

/// Segment-count histogram of `trials` Gaussian walks of length `n`, tested
/// against `s(n,k)/n!`.
pub fn majorant_segment_law(n: usize, trials: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    let row = intrinsic_volume_row(Family::A, n)?;
    let hist = sharded_histogram(par, seed, trials, |rng| {
        let mut walk = Vec::with_capacity(n + 1);
        let mut s = 0.0;
        walk.push(s);
        for _ in 0..n {
            s += rng.sample::<f64, _>(StandardNormal);
            walk.push(s);
        }
        segment_count(&walk)
    });
    let law = row.values.into_iter().enumerate().collect();
    z_test(format!("majorant n={n}"), seed, counts_from_histogram(&hist), law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::stream_rng;
    use proptest::prelude::*;

    #[test]
    fn hand_examples() {
        assert_eq!(segment_count(&[0.0, 1.0]), 1);
        // Concave: two segments.
        assert_eq!(segment_count(&[0.0, 2.0, 3.0]), 2);
        // Convex: one chord.
        assert_eq!(segment_count(&[0.0, -1.0, 1.0]), 1);
        // Collinear points merge.
        assert_eq!(segment_count(&[0.0, 1.0, 2.0, 3.0]), 1);
        assert_eq!(upper_hull(&[0.0, 3.0, 1.0, 2.0]), vec![0, 1, 3]);
    }

    #[test]
    fn trivial_laws() {
        let r = majorant_segment_law(1, 500, 0, Parallelism::sequential()).unwrap();
        assert_eq!(r.outcomes.get(&1), Some(&500));
        assert!(r.verdict);
        let r = majorant_segment_law(2, 40_000, 0, Parallelism::sequential()).unwrap();
        assert!(r.verdict);
        assert!((r.frequency(1) - 0.5).abs() < 0.02);
    }

    fn gaussian_walk(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0);
        let mut s = 0.0;
        std::iter::once(0.0)
            .chain((0..n).map(|_| {
                s += rand::Rng::sample::<f64, _>(&mut rng, StandardNormal);
                s
            }))
            .collect()
    }

    proptest! {
        #[test]
        fn hull_is_concave_and_dominates(n in 1usize..40, seed in any::<u64>()) {
            let walk = gaussian_walk(n, seed);
            let hull = upper_hull(&walk);
            prop_assert_eq!(hull[0], 0);
            prop_assert_eq!(*hull.last().unwrap(), n);
            let slopes = hull_slopes(&walk, &hull);
            prop_assert!(slopes.windows(2).all(|w| w[0] > w[1]));
            for i in 0..=n {
                prop_assert!(majorant_at(&walk, &hull, i) >= walk[i] - 1e-9);
            }
            let mut distinct = slopes.clone();
            distinct.dedup();
            prop_assert_eq!(segment_count(&walk), distinct.len());
        }
    }
}
