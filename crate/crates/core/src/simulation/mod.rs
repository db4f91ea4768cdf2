//! Monte Carlo checks of every probabilistic statement against exact laws.
//!
//! Samplers draw through [`crate::parallel`], so a report depends only on
//! its parameters and seed. Exact reference laws always come from
//! [`crate::combinatorics`].

mod angles;
mod bernoulli;
mod majorant;
mod perms;
mod report;

pub use angles::{estimate_angle_b, estimate_angle_d, estimate_internal_angle};
pub use bernoulli::{bernoulli_parameters, bernoulli_sum_law};
pub use majorant::{hull_slopes, majorant_at, majorant_segment_law, segment_count, upper_hull, COLLINEAR_TOL};
pub use perms::{enumerate, even_cycle_exhaustive, even_cycle_law, PermKind, SignedPermutation, EXHAUSTIVE_MAX_N};
pub use report::{
    bernoulli_law, counts_from_histogram, z_test, Cell, SimReport, IMPOSSIBLE_Z, MIN_EXPECTED, MIN_SAMPLES,
    Z_THRESHOLD,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chambers::{all_faces, internal_angle_spec, reconstruct_volume, AngleEstimate, Chamber};
use crate::combinatorics::{intrinsic_volume_row, ExactRational};
use crate::error::Result;
use crate::parallel::{derive_seed, Parallelism};
use crate::projection::face_dimension_histogram;

/// Face dimension of the projection of Gaussian vectors onto `chamber`,
/// tested against its intrinsic volumes.
pub fn face_dimension_law(chamber: Chamber, samples: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    let row = intrinsic_volume_row(chamber.family(), chamber.dim())?;
    let hist = face_dimension_histogram(chamber, samples, seed, par);
    let law = row.values.into_iter().enumerate().collect();
    z_test(format!("facedim {chamber}"), seed, counts_from_histogram(&hist), law)
}

/// One intrinsic volume rebuilt from exact external and sampled internal
/// angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub k: usize,
    pub exact: ExactRational,
    pub estimate: f64,
    pub std_error: f64,
    pub passed: bool,
}

/// Rebuilds every `v_k` of `chamber` with `samples` draws per face. Faces
/// get independent streams derived from `seed`. A value passes when it is
/// within `Z_THRESHOLD` standard errors of the exact one (or equal up to
/// rounding when every angle involved is exact).
pub fn reconstruction_check(
    chamber: Chamber,
    samples: u64,
    seed: u64,
    par: Parallelism,
) -> Result<Vec<Reconstruction>> {
    let row = intrinsic_volume_row(chamber.family(), chamber.dim())?;
    let mut angles: BTreeMap<_, AngleEstimate> = BTreeMap::new();
    for (i, face) in all_faces(chamber)?.into_iter().enumerate() {
        let est = estimate_internal_angle(&internal_angle_spec(&face), samples, derive_seed(seed, i as u64), par)?;
        angles.insert(face, est);
    }
    (0..=chamber.dim())
        .map(|k| {
            let est = reconstruct_volume(chamber, k, &angles)?;
            let exact = row.get(k);
            let diff = (est.value - exact.to_f64()).abs();
            Ok(Reconstruction {
                k,
                passed: diff <= Z_THRESHOLD * est.std_error + 1e-12,
                exact,
                estimate: est.value,
                std_error: est.std_error,
            })
        })
        .collect()
}
