//! Named verification suites combining exact, oracle and statistical checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chambers::{Chamber, Family};
use crate::combinatorics::{expand_defining_polynomial, triangle, verify_identity, Identity, TriangleKind};
use crate::error::{Error, Result};
use crate::parallel::{derive_seed, stream_rng, Parallelism};
use crate::projection::{certificate, project, project_bruteforce};
use crate::simulation::{
    bernoulli_sum_law, estimate_angle_b, estimate_angle_d, even_cycle_exhaustive, even_cycle_law,
    face_dimension_law, majorant_segment_law, reconstruction_check, PermKind, SimReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Projection,
    Montecarlo,
    Exhaustive,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Projection => "projection",
            Suite::Montecarlo => "montecarlo",
            Suite::Exhaustive => "exhaustive",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "projection" => Ok(Suite::Projection),
            "montecarlo" => Ok(Suite::Montecarlo),
            "exhaustive" => Ok(Suite::Exhaustive),
            "all" => Ok(Suite::All),
            _ => Err(Error::Invalid(format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Largest `n` for the exact identity checks.
    pub n_max: usize,
    /// Samples per Monte Carlo experiment.
    pub samples: u64,
    /// Seeded Gaussian points per `(family, n)` in the projection suite.
    pub projection_points: usize,
    pub seed: u64,
    pub par: Parallelism,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n_max: 100,
            samples: 100_000,
            projection_points: 1000,
            seed: 0,
            par: Parallelism::sequential(),
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::Identities => identities(cfg),
        Suite::Projection => projection(cfg),
        Suite::Montecarlo => montecarlo(cfg),
        Suite::Exhaustive => exhaustive(),
        Suite::All => {
            let mut out = identities(cfg)?;
            out.extend(exhaustive()?);
            out.extend(projection(cfg)?);
            out.extend(montecarlo(cfg)?);
            Ok(out)
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn identities(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for kind in TriangleKind::ALL {
        let tri = triangle(kind, cfg.n_max);
        let mismatched: Vec<usize> = (0..=cfg.n_max)
            .filter(|&n| {
                let poly = expand_defining_polynomial(kind, n);
                (0..=n).any(|k| num_bigint::BigInt::from(tri.get(n, k)) != poly.coeff(k))
            })
            .collect();
        out.push(CheckRecord {
            suite: Suite::Identities,
            name: format!("triangle_{kind}"),
            passed: mismatched.is_empty(),
            detail: json!({ "n_max": cfg.n_max, "mismatched_rows": mismatched }),
        });
    }
    for id in Identity::ALL {
        let report = verify_identity(id, cfg.n_max)?;
        out.push(CheckRecord {
            suite: Suite::Identities,
            name: id.name().to_string(),
            passed: report.passed(),
            detail: to_value(&report),
        });
    }
    Ok(out)
}

pub fn exhaustive() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for kind in [PermKind::Signed, PermKind::DPerm] {
        let tri = triangle(kind.family().triangle_kind(), 5);
        for n in 1..=5 {
            let counts = even_cycle_exhaustive(kind, n)?;
            let passed = (0..=n).all(|k| num_bigint::BigUint::from(counts[k]) == tri.get(n, k));
            out.push(CheckRecord {
                suite: Suite::Exhaustive,
                name: format!("even_cycles_{kind}_n{n}"),
                passed,
                detail: json!({
                    "group_order": counts.iter().sum::<u64>(),
                    "counts": counts,
                    "row": tri.row(n).iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            });
        }
    }
    Ok(out)
}

/// Tolerance for the projection oracle and certificate.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Fast projection against the face-enumeration oracle on seeded Gaussian
/// points, for every family and `n` in `2..=6`.
pub fn projection(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    use rand::Rng;
    use rand_distr::StandardNormal;

    let mut out = Vec::new();
    for family in Family::ALL {
        for n in 2..=6 {
            let chamber = Chamber::new(family, n)?;
            let mut rng = stream_rng(cfg.seed, derive_seed(family as u64, n as u64));
            let (mut point_err, mut face_mismatches, mut worst_cert) = (0.0_f64, 0usize, 0.0_f64);
            for _ in 0..cfg.projection_points {
                let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let fast = project(chamber, &x)?;
                let slow = project_bruteforce(chamber, &x)?;
                let err = fast.point.iter().zip(&slow.point).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                point_err = point_err.max(err);
                face_mismatches += usize::from(fast.face_dim != slow.face_dim);
                let c = certificate(chamber, &x, &fast.point)?;
                worst_cert = worst_cert.max(c.feasibility).max(c.dual_residual).max(c.orthogonality);
            }
            out.push(CheckRecord {
                suite: Suite::Projection,
                name: format!("projection_{family}{n}"),
                passed: point_err <= PROJECTION_TOL && face_mismatches == 0 && worst_cert <= PROJECTION_TOL,
                detail: json!({
                    "points": cfg.projection_points,
                    "max_point_error": point_err,
                    "face_dim_mismatches": face_mismatches,
                    "max_certificate_residual": worst_cert,
                }),
            });
        }
    }
    Ok(out)
}

fn sim_record(name: String, report: SimReport) -> CheckRecord {
    CheckRecord {
        suite: Suite::Montecarlo,
        name,
        passed: report.verdict,
        detail: to_value(&report),
    }
}

/// All statistical experiments, each on its own derived seed.
pub fn montecarlo(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut next = 0u64;
    let mut seed = || {
        next += 1;
        derive_seed(cfg.seed, next)
    };
    let (s, par) = (cfg.samples, cfg.par);
    for (family, n) in [(Family::A, 5), (Family::B, 4), (Family::D, 4)] {
        let r = face_dimension_law(Chamber::new(family, n)?, s, seed(), par)?;
        out.push(sim_record(format!("facedim_{family}{n}"), r));
    }
    for m in 2..=6 {
        out.push(sim_record(format!("angle_d_m{m}"), estimate_angle_d(m, s, seed(), par)?));
    }
    for m in 1..=6 {
        out.push(sim_record(format!("angle_b_m{m}"), estimate_angle_b(m, s, seed(), par)?));
    }
    out.push(sim_record("majorant_n6".into(), majorant_segment_law(6, s, seed(), par)?));
    for kind in [PermKind::Signed, PermKind::DPerm] {
        out.push(sim_record(format!("even_cycles_{kind}_n5"), even_cycle_law(kind, 5, s, seed(), par)?));
    }
    for family in Family::ALL {
        out.push(sim_record(format!("bernoulli_{family}_n5"), bernoulli_sum_law(family, 5, s, seed(), par)?));
    }
    for (family, n) in [(Family::A, 4), (Family::B, 3)] {
        let rows = reconstruction_check(Chamber::new(family, n)?, s, seed(), par)?;
        out.push(CheckRecord {
            suite: Suite::Montecarlo,
            name: format!("reconstruction_{family}{n}"),
            passed: rows.iter().all(|r| r.passed),
            detail: to_value(&rows),
        });
    }
    Ok(out)
}
