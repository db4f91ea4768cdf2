//! Solid angles of the bridge and walk cones, and internal face angles.

use rand::Rng;
use rand_distr::StandardNormal;

use super::report::{bernoulli_law, counts_from_histogram, z_test, SimReport};
use crate::chambers::{AngleEstimate, Block, OrthantDescriptor};
use crate::error::{Error, Result};
use crate::parallel::{sharded_histogram, Parallelism};

fn require_positive(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    Ok(())
}

/// Frequency with which a Gaussian bridge of length `m` keeps every proper
/// partial sum `<= 0`, tested against `1/m`.
pub fn estimate_angle_d(m: usize, samples: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    require_positive(m)?;
    let hist = sharded_histogram(par, seed, samples, |rng| {
        let x: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mean = x.iter().sum::<f64>() / m as f64;
        let mut s = 0.0;
        for v in &x[..m - 1] {
            s += v - mean;
            if s > 0.0 {
                return 0;
            }
        }
        1
    });
    z_test(
        format!("angle-d m={m}"),
        seed,
        counts_from_histogram(&hist),
        bernoulli_law(Block::Bridge(m).solid_angle()),
    )
}

/// Frequency with which a Gaussian walk of length `m` stays `<= 0`, tested
/// against `C(2m,m)/4^m`.
pub fn estimate_angle_b(m: usize, samples: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    require_positive(m)?;
    let hist = sharded_histogram(par, seed, samples, |rng| {
        let mut s = 0.0;
        for _ in 0..m {
            s += rng.sample::<f64, _>(StandardNormal);
            if s > 0.0 {
                return 0;
            }
        }
        1
    });
    z_test(
        format!("angle-b m={m}"),
        seed,
        counts_from_histogram(&hist),
        bernoulli_law(Block::Walk(m).solid_angle()),
    )
}

/// Monte Carlo chain probability with its binomial standard error.
pub fn estimate_internal_angle(
    descriptor: &OrthantDescriptor,
    samples: u64,
    seed: u64,
    par: Parallelism,
) -> Result<AngleEstimate> {
    if descriptor.is_certain() {
        return Ok(AngleEstimate::exact(1.0));
    }
    if samples == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let len = descriptor.gaps.len();
    let hist = sharded_histogram(par, seed, samples, |rng| {
        let xi: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        usize::from(descriptor.event(&xi))
    });
    let hits = hist.get(1).copied().unwrap_or(0) as f64;
    let n = samples as f64;
    let p = hits / n;
    Ok(AngleEstimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::Family;
    use crate::combinatorics::{intrinsic_volume_row, ExactRational};

    const SEQ: Parallelism = Parallelism::sequential();

    #[test]
    fn trivial_lengths() {
        let r = estimate_angle_d(1, 1000, 0, SEQ).unwrap();
        assert_eq!(r.outcomes.get(&1), Some(&1000));
        assert!(r.verdict);
        assert!(estimate_angle_d(0, 1000, 0, SEQ).is_err());
    }

    #[test]
    fn walk_angle_is_the_b_chamber_volume() {
        for m in 1..=8 {
            let row = intrinsic_volume_row(Family::B, m).unwrap();
            assert_eq!(Block::Walk(m).solid_angle(), row.get(0));
        }
        assert_eq!(Block::Walk(4).solid_angle(), ExactRational::new(70, 256));
    }

    #[test]
    fn small_runs_pass() {
        for m in 1..=4 {
            assert!(estimate_angle_d(m, 50_000, 3, SEQ).unwrap().verdict, "D m={m}");
            assert!(estimate_angle_b(m, 50_000, 3, SEQ).unwrap().verdict, "B m={m}");
        }
    }

    #[test]
    fn deterministic_under_threads() {
        let a = estimate_angle_b(3, 70_000, 11, SEQ).unwrap();
        let b = estimate_angle_b(3, 70_000, 11, Parallelism::threads(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn internal_angles() {
        let empty = OrthantDescriptor {
            family: Family::A,
            gaps: vec![],
            nonnegative_tail: false,
        };
        let e = estimate_internal_angle(&empty, 10, 0, SEQ).unwrap();
        assert_eq!((e.value, e.std_error), (1.0, 0.0));

        let pair = OrthantDescriptor {
            family: Family::A,
            gaps: vec![1, 1],
            nonnegative_tail: false,
        };
        let e = estimate_internal_angle(&pair, 100_000, 1, SEQ).unwrap();
        assert!((e.value - 0.5).abs() < 4.0 * e.std_error);

        let wedge = OrthantDescriptor {
            family: Family::B,
            gaps: vec![1, 1],
            nonnegative_tail: true,
        };
        let exact = wedge.closed_form().unwrap();
        assert!((exact - 0.125).abs() < 1e-15);
        let e = estimate_internal_angle(&wedge, 100_000, 2, SEQ).unwrap();
        assert!((e.value - exact).abs() < 4.0 * e.std_error);
    }
}
