//! Euclidean projection onto the chambers, with the face containing the
//! projection in its relative interior.
//!
//! * `A`: non-increasing isotonic regression; one face dimension per block.
//! * `B`: the `A` fit clamped at zero. Nonpositive blocks form a suffix and
//!   collapse into a single zero block.
//! * `D`: the chamber is the union of the `B` chamber and its mirror image
//!   under `b_n -> -b_n`, so the projection is the nearer of the two
//!   half-projections.
//!
//! Face dimensions come from the block structure PAVA produces, never from
//! comparing fitted values against a tolerance.

mod bruteforce;
pub mod pava;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::chambers::{dual_cone_description, Chamber, Family};
use crate::error::{Error, Result};
use crate::parallel::{sharded_histogram, Parallelism};

pub use bruteforce::{project_bruteforce, BRUTE_FORCE_MAX_DIM};
pub use pava::{fitted, pava_decreasing, PavaBlock};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectedBlock {
    pub len: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub family: Family,
    pub point: Vec<f64>,
    pub face_dim: usize,
    /// Runs of equal coordinates. For `D` these describe the winning half
    /// before the last coordinate's sign is restored.
    pub blocks: Vec<ProjectedBlock>,
    /// `D` only: the winning half is the mirrored one (`b_n <= 0`).
    #[serde(default)]
    pub last_sign_flipped: bool,
}

/// Projects `x` onto `chamber`.
pub fn project(chamber: Chamber, x: &[f64]) -> Result<ProjectionResult> {
    validate_input(chamber, x)?;
    Ok(match chamber.family() {
        Family::A => {
            let blocks = pava::pava_unit(x);
            ProjectionResult {
                family: Family::A,
                point: fitted(&blocks),
                face_dim: blocks.len(),
                blocks: blocks.iter().map(|b| ProjectedBlock { len: b.len, value: b.value }).collect(),
                last_sign_flipped: false,
            }
        }
        Family::B => {
            let half = project_half(x);
            ProjectionResult {
                family: Family::B,
                point: half.point,
                face_dim: half.positive_blocks,
                blocks: half.blocks,
                last_sign_flipped: false,
            }
        }
        Family::D => project_d(x),
    })
}

/// Face dimension only; the hot path of the sampling loops.
pub fn face_dimension(chamber: Chamber, x: &[f64]) -> Result<usize> {
    validate_input(chamber, x)?;
    Ok(match chamber.family() {
        Family::A => pava::pava_unit(x).len(),
        Family::B => project_half(x).positive_blocks,
        Family::D => project_d(x).face_dim,
    })
}

fn validate_input(chamber: Chamber, x: &[f64]) -> Result<()> {
    if x.len() != chamber.dim() {
        return Err(Error::LengthMismatch {
            expected: chamber.dim(),
            got: x.len(),
        });
    }
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

struct HalfProjection {
    point: Vec<f64>,
    blocks: Vec<ProjectedBlock>,
    positive_blocks: usize,
    zero_tail: usize,
}

/// Projection onto `{b_1 >= ... >= b_n >= 0}`.
fn project_half(x: &[f64]) -> HalfProjection {
    let pooled = pava::pava_unit(x);
    let mut blocks: Vec<ProjectedBlock> = pooled
        .iter()
        .take_while(|b| b.value > 0.0)
        .map(|b| ProjectedBlock { len: b.len, value: b.value })
        .collect();
    let positive_blocks = blocks.len();
    let zero_tail = x.len() - blocks.iter().map(|b| b.len).sum::<usize>();
    if zero_tail > 0 {
        blocks.push(ProjectedBlock { len: zero_tail, value: 0.0 });
    }
    let point = blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.value, b.len))
        .collect();
    HalfProjection {
        point,
        blocks,
        positive_blocks,
        zero_tail,
    }
}

fn project_d(x: &[f64]) -> ProjectionResult {
    let n = x.len();
    let direct = project_half(x);
    let mut mirrored_input = x.to_vec();
    mirrored_input[n - 1] = -mirrored_input[n - 1];
    let mirrored = project_half(&mirrored_input);

    let dist = |p: &[f64], y: &[f64]| p.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    // Both halves are measured against their own (possibly mirrored) input;
    // the mirror is an isometry so the distances are comparable.
    let flipped = dist(&mirrored.point, &mirrored_input) < dist(&direct.point, x);
    let mut half = if flipped { mirrored } else { direct };
    if flipped {
        half.point[n - 1] = -half.point[n - 1];
    }
    // In C(D_n) the active constraints are the equalities inside blocks plus
    // b_{n-1} = -b_n, which holds iff the zero tail has length >= 2. A zero
    // tail of exactly one coordinate therefore frees one extra dimension.
    let face_dim = half.positive_blocks + usize::from(half.zero_tail == 1);
    ProjectionResult {
        family: Family::D,
        point: half.point,
        face_dim,
        blocks: half.blocks,
        last_sign_flipped: flipped,
    }
}

/// Optimality certificate of a candidate projection `p` of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Largest violation of a defining inequality by `p`.
    pub feasibility: f64,
    /// Largest violation of a polar-cone constraint by `x - p`.
    pub dual_residual: f64,
    /// `|<x - p, p>|`
    pub orthogonality: f64,
}

impl Certificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.feasibility <= tol && self.dual_residual <= tol && self.orthogonality <= tol
    }
}

pub fn certificate(chamber: Chamber, x: &[f64], p: &[f64]) -> Result<Certificate> {
    validate_input(chamber, x)?;
    validate_input(chamber, p)?;
    let residual: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
    let dual_residual = match chamber.family() {
        Family::A | Family::B => dual_cone_description(chamber)?.max_violation(&residual),
        Family::D => {
            // Polar of a union is the intersection of the polars.
            let b_dual = dual_cone_description(Chamber::new(Family::B, chamber.dim())?)?;
            let mut mirrored = residual.clone();
            let last = mirrored.len() - 1;
            mirrored[last] = -mirrored[last];
            b_dual.max_violation(&residual).max(b_dual.max_violation(&mirrored))
        }
    };
    Ok(Certificate {
        feasibility: chamber.max_violation(p),
        dual_residual,
        orthogonality: residual.iter().zip(p).map(|(r, q)| r * q).sum::<f64>().abs(),
    })
}

/// Counts of the face dimension of the projection of `samples` standard
/// Gaussian vectors; index `k` holds the count for dimension `k`.
pub fn face_dimension_histogram(chamber: Chamber, samples: u64, seed: u64, par: Parallelism) -> Vec<u64> {
    let n = chamber.dim();
    let mut counts = sharded_histogram(par, seed, samples, |rng| {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        face_dimension(chamber, &g).expect("dimension matches chamber")
    });
    counts.resize(n + 1, 0);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::stream_rng;
    use proptest::prelude::*;

    fn ch(family: Family, n: usize) -> Chamber {
        Chamber::new(family, n).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn examples() {
        let r = project(ch(Family::A, 2), &[2.0, 1.0]).unwrap();
        assert_eq!(r.point, vec![2.0, 1.0]);
        assert_eq!(r.face_dim, 2);

        let r = project(ch(Family::B, 3), &[-1.0, -2.0, 3.0]).unwrap();
        assert_eq!(r.point, vec![0.0, 0.0, 0.0]);
        assert_eq!(r.face_dim, 0);

        let r = project(ch(Family::B, 1), &[-5.0]).unwrap();
        assert_eq!(r.point, vec![0.0]);
        assert_eq!(r.face_dim, 0);

        let r = project(ch(Family::D, 2), &[1.0, -2.0]).unwrap();
        assert!(close(&r.point, &[1.5, -1.5], 1e-15));
        assert_eq!(r.face_dim, 1);
        assert!(r.last_sign_flipped);
    }

    #[test]
    fn d_example_agrees_with_oracle() {
        let c = ch(Family::D, 2);
        let fast = project(c, &[1.0, -2.0]).unwrap();
        let slow = project_bruteforce(c, &[1.0, -2.0]).unwrap();
        assert!(close(&fast.point, &slow.point, 1e-12));
        assert_eq!(fast.face_dim, slow.face_dim);
    }

    #[test]
    fn d_single_zero_tail_is_interior_of_half_facet() {
        // (1, 0) lies in the interior of C(D_2) although it sits on the
        // boundary of both halves.
        let r = project(ch(Family::D, 2), &[1.0, -0.0]).unwrap();
        assert_eq!(r.face_dim, 2);
        assert_eq!(project_bruteforce(ch(Family::D, 2), &[1.0, 0.0]).unwrap().face_dim, 2);
        let r = project(ch(Family::D, 3), &[2.0, -1.0, -3.0]).unwrap();
        let slow = project_bruteforce(ch(Family::D, 3), &[2.0, -1.0, -3.0]).unwrap();
        assert!(close(&r.point, &slow.point, 1e-12));
        assert_eq!(r.face_dim, slow.face_dim);
    }

    #[test]
    fn one_dimensional_a_is_the_line() {
        let r = project(ch(Family::A, 1), &[-3.5]).unwrap();
        assert_eq!(r.point, vec![-3.5]);
        assert_eq!(r.face_dim, 1);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(project(ch(Family::A, 3), &[1.0]), Err(Error::LengthMismatch { .. })));
        assert_eq!(project(ch(Family::B, 2), &[1.0, f64::INFINITY]), Err(Error::NonFinite(1)));
    }

    #[test]
    fn certificates_on_gaussians() {
        let mut rng = stream_rng(3, 0);
        for family in Family::ALL {
            for n in 2..=6 {
                let c = ch(family, n);
                for _ in 0..200 {
                    let x: Vec<f64> = (0..n).map(|_| rand::Rng::sample(&mut rng, StandardNormal)).collect();
                    let r = project(c, &x).unwrap();
                    let cert = certificate(c, &x, &r.point).unwrap();
                    assert!(cert.holds(1e-9), "{c} {x:?} {cert:?}");
                }
            }
        }
    }

    #[test]
    fn certificate_rejects_wrong_point() {
        let c = ch(Family::B, 2);
        let cert = certificate(c, &[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(cert.feasibility > 0.5);
        let cert = certificate(c, &[1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert!(!cert.holds(1e-9));
    }

    #[test]
    fn histogram_trivial_cases() {
        let h = face_dimension_histogram(ch(Family::A, 1), 1000, 1, Parallelism::sequential());
        assert_eq!(h, vec![0, 1000]);
        let h = face_dimension_histogram(ch(Family::B, 1), 10_000, 1, Parallelism::sequential());
        assert_eq!(h.iter().sum::<u64>(), 10_000);
        assert!((h[0] as f64 / 1e4 - 0.5).abs() < 4.0 * 0.005);
    }

    fn family_strategy() -> impl Strategy<Value = Family> {
        prop_oneof![Just(Family::A), Just(Family::B), Just(Family::D)]
    }

    proptest! {
        #[test]
        fn idempotent_and_scale_equivariant(
            family in family_strategy(),
            x in prop::collection::vec(-3.0f64..3.0, 2..7),
            c in 0.1f64..10.0,
        ) {
            let chamber = ch(family, x.len());
            let p = project(chamber, &x).unwrap();
            let pp = project(chamber, &p.point).unwrap();
            prop_assert!(close(&p.point, &pp.point, 1e-9));
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            let ps = project(chamber, &scaled).unwrap();
            let expected: Vec<f64> = p.point.iter().map(|v| v * c).collect();
            prop_assert!(close(&ps.point, &expected, 1e-9 * c.max(1.0)));
        }

        #[test]
        fn nonexpansive(
            family in family_strategy(),
            xy in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..7),
        ) {
            let chamber = ch(family, xy.len());
            let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
            let px = project(chamber, &x).unwrap().point;
            let py = project(chamber, &y).unwrap().point;
            let norm = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
            prop_assert!(norm(&px, &py) <= norm(&x, &y) + 1e-9);
        }

        #[test]
        fn agrees_with_bruteforce(
            family in family_strategy(),
            x in prop::collection::vec(-3.0f64..3.0, 1..7),
        ) {
            prop_assume!(x.len() >= family.min_dimension());
            let chamber = ch(family, x.len());
            let fast = project(chamber, &x).unwrap();
            let slow = project_bruteforce(chamber, &x).unwrap();
            prop_assert!(close(&fast.point, &slow.point, 1e-9));
            prop_assert_eq!(fast.face_dim, slow.face_dim);
        }
    }
}
