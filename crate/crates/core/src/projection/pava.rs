//! Pool-adjacent-violators for non-increasing least squares.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A maximal run of pooled coordinates sharing one fitted value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PavaBlock {
    pub start: usize,
    pub len: usize,
    /// Weighted mean of the pooled entries.
    pub value: f64,
    pub weight: f64,
}

/// Non-increasing isotonic regression of `x` with positive `weights`.
///
/// Block values are strictly decreasing. Two neighbours are pooled whenever
/// the earlier value is `<=` the later one, so exact ties always end up in
/// one block.
pub fn pava_decreasing(x: &[f64], weights: &[f64]) -> Result<Vec<PavaBlock>> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if x.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: weights.len(),
        });
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::BadWeight(i));
    }
    Ok(pool(x.iter().copied().zip(weights.iter().copied())))
}

/// Unit-weight variant; `x` must be non-empty and finite.
pub(crate) fn pava_unit(x: &[f64]) -> Vec<PavaBlock> {
    pool(x.iter().map(|&v| (v, 1.0)))
}

fn pool(entries: impl Iterator<Item = (f64, f64)>) -> Vec<PavaBlock> {
    // Blocks carry the weighted sum in `value` until the final pass.
    let mut stack: Vec<PavaBlock> = Vec::new();
    for (i, (v, w)) in entries.enumerate() {
        let mut top = PavaBlock {
            start: i,
            len: 1,
            value: v * w,
            weight: w,
        };
        while let Some(prev) = stack.last() {
            if prev.value / prev.weight > top.value / top.weight {
                break;
            }
            top = PavaBlock {
                start: prev.start,
                len: prev.len + top.len,
                value: prev.value + top.value,
                weight: prev.weight + top.weight,
            };
            stack.pop();
        }
        stack.push(top);
    }
    for b in &mut stack {
        b.value /= b.weight;
    }
    stack
}

/// Expands blocks into the fitted vector.
pub fn fitted(blocks: &[PavaBlock]) -> Vec<f64> {
    blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.value, b.len))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(x: &[f64]) -> Vec<PavaBlock> {
        pava_decreasing(x, &vec![1.0; x.len()]).unwrap()
    }

    #[test]
    fn examples() {
        let b = unit(&[1.0, 2.0]);
        assert_eq!(b.len(), 1);
        assert_eq!(fitted(&b), vec![1.5, 1.5]);

        let b = unit(&[2.0, 1.0]);
        assert_eq!(b.len(), 2);
        assert_eq!(fitted(&b), vec![2.0, 1.0]);

        let b = unit(&[-1.0, -2.0, 3.0]);
        assert_eq!(b.len(), 1);
        assert_eq!(fitted(&b), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn ties_pool() {
        assert_eq!(unit(&[1.0, 1.0, 0.0]).len(), 2);
    }

    #[test]
    fn weighted() {
        let b = pava_decreasing(&[0.0, 3.0], &[2.0, 1.0]).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0].value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(pava_decreasing(&[], &[]), Err(Error::EmptyInput));
        assert!(matches!(pava_decreasing(&[1.0], &[1.0, 1.0]), Err(Error::LengthMismatch { .. })));
        assert_eq!(pava_decreasing(&[f64::NAN], &[1.0]), Err(Error::NonFinite(0)));
        assert_eq!(pava_decreasing(&[1.0], &[0.0]), Err(Error::BadWeight(0)));
    }

    /// Exhaustive oracle: the best non-increasing fit is constant on the
    /// blocks of some partition of `0..n` into runs; try every partition,
    /// keep the feasible fits and pick the closest.
    fn brute_force(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 0u32..(1 << (n - 1)) {
            let mut fit = Vec::with_capacity(n);
            let mut start = 0;
            for i in 0..n {
                if i == n - 1 || mask & (1 << i) != 0 {
                    let mean = x[start..=i].iter().sum::<f64>() / (i + 1 - start) as f64;
                    fit.extend(std::iter::repeat_n(mean, i + 1 - start));
                    start = i + 1;
                }
            }
            if fit.windows(2).any(|w| w[0] < w[1] - 1e-12) {
                continue;
            }
            let d: f64 = x.iter().zip(&fit).map(|(a, b)| (a - b).powi(2)).sum();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, fit));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn matches_brute_force_on_hand_example() {
        let x = [-1.0, -2.0, 3.0];
        assert_eq!(brute_force(&x), vec![0.0, 0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn agrees_with_partition_oracle(x in prop::collection::vec(-5.0f64..5.0, 1..8)) {
            let fit = fitted(&unit(&x));
            let oracle = brute_force(&x);
            for (a, b) in fit.iter().zip(&oracle) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn blocks_strictly_decrease_and_cover(x in prop::collection::vec(-5.0f64..5.0, 1..20)) {
            let blocks = unit(&x);
            prop_assert!(blocks.windows(2).all(|w| w[0].value > w[1].value));
            prop_assert_eq!(blocks.iter().map(|b| b.len).sum::<usize>(), x.len());
            prop_assert!(blocks.windows(2).all(|w| w[0].start + w[0].len == w[1].start));
        }
    }
}
