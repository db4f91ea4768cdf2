//! Sums of independent Bernoulli variables with the chamber parameters.

use rand::Rng;

use super::report::{counts_from_histogram, z_test, SimReport};
use crate::chambers::Family;
use crate::combinatorics::intrinsic_volume_row;
use crate::error::{Error, Result};
use crate::parallel::{sharded_histogram, Parallelism};

/// Success probabilities of the summands: `1/j` (A), `1/(2j)` (B), and for D
/// `1/(2j)` for `j < n` followed by `1/n`.
pub fn bernoulli_parameters(family: Family, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { family, n, min: 1 });
    }
    let p = |j: usize| match family {
        Family::A => 1.0 / j as f64,
        Family::B => 1.0 / (2 * j) as f64,
        Family::D if j < n => 1.0 / (2 * j) as f64,
        Family::D => 1.0 / n as f64,
    };
    Ok((1..=n).map(p).collect())
}

pub fn bernoulli_sum_law(family: Family, n: usize, trials: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    let params = bernoulli_parameters(family, n)?;
    let row = intrinsic_volume_row(family, n)?;
    let hist = sharded_histogram(par, seed, trials, |rng| {
        params.iter().filter(|&&p| rng.random_bool(p)).count()
    });
    let law = row.values.into_iter().enumerate().collect();
    z_test(format!("bernoulli {family} n={n}"), seed, counts_from_histogram(&hist), law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ExactRational;

    /// Exact law of a Bernoulli sum by convolution.
    fn convolve(params: &[ExactRational]) -> Vec<ExactRational> {
        let mut law = vec![ExactRational::one()];
        for p in params {
            let q = ExactRational::one() - p.clone();
            let mut next = vec![ExactRational::zero(); law.len() + 1];
            for (k, v) in law.iter().enumerate() {
                next[k] = &next[k] + &(v * &q);
                next[k + 1] = &next[k + 1] + &(v * p);
            }
            law = next;
        }
        law
    }

    fn exact_params(family: Family, n: usize) -> Vec<ExactRational> {
        (1..=n as i64)
            .map(|j| match family {
                Family::A => ExactRational::new(1, j),
                Family::D if j == n as i64 => ExactRational::new(1, j),
                _ => ExactRational::new(1, 2 * j),
            })
            .collect()
    }

    #[test]
    fn convolution_equals_volume_rows() {
        for family in Family::ALL {
            for n in 1..=12 {
                let row = intrinsic_volume_row(family, n).unwrap();
                assert_eq!(convolve(&exact_params(family, n)), row.values, "{family} n={n}");
            }
        }
    }

    #[test]
    fn float_parameters_match_exact_ones() {
        for family in Family::ALL {
            let f = bernoulli_parameters(family, 6).unwrap();
            let e = exact_params(family, 6);
            for (a, b) in f.iter().zip(&e) {
                assert_eq!(*a, b.to_f64());
            }
        }
    }

    #[test]
    fn sampled_laws() {
        let par = Parallelism::sequential();
        let r = bernoulli_sum_law(Family::A, 1, 200, 0, par).unwrap();
        assert_eq!(r.outcomes.get(&1), Some(&200));
        for family in Family::ALL {
            assert!(bernoulli_sum_law(family, 2, 40_000, 9, par).unwrap().verdict);
            assert!(bernoulli_sum_law(family, 5, 40_000, 9, par).unwrap().verdict);
        }
        assert!(bernoulli_sum_law(Family::B, 0, 200, 0, par).is_err());
    }
}
