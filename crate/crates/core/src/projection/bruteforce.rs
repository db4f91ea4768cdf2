//! Reference projection by exhaustive search over faces.
//!
//! Every chamber here is cut out by linearly independent half-spaces
//! `<a_i, y> >= 0`. Each subset `S` of them, turned into equalities, spans a
//! face; we project onto the null space of `A_S`, keep the feasible
//! candidates and return the closest. Among equally close candidates the one
//! with the most equalities wins, which is exactly the face whose relative
//! interior holds the projection, so `face_dim = n - |S|`.

use nalgebra::{DMatrix, DVector};

use super::{validate_input, ProjectedBlock, ProjectionResult};
use crate::chambers::{Chamber, Family};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_MAX_DIM: usize = 10;

/// Rows `a_i` of the inequalities `<a_i, y> >= 0`.
fn constraint_rows(chamber: Chamber) -> Vec<Vec<f64>> {
    let n = chamber.dim();
    let mut rows: Vec<Vec<f64>> = (0..n - 1)
        .map(|i| {
            let mut a = vec![0.0; n];
            a[i] = 1.0;
            a[i + 1] = -1.0;
            a
        })
        .collect();
    match chamber.family() {
        Family::A => {}
        Family::B => {
            let mut a = vec![0.0; n];
            a[n - 1] = 1.0;
            rows.push(a);
        }
        Family::D => {
            let mut a = vec![0.0; n];
            a[n - 2] = 1.0;
            a[n - 1] = 1.0;
            rows.push(a);
        }
    }
    rows
}

/// Projection of `x` onto `{y : A_S y = 0}`.
fn project_onto_null_space(x: &DVector<f64>, rows: &[&Vec<f64>]) -> Option<DVector<f64>> {
    if rows.is_empty() {
        return Some(x.clone());
    }
    let n = x.len();
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let gram = &a * a.transpose();
    let rhs = &a * x;
    let lambda = gram.cholesky()?.solve(&rhs);
    Some(x - a.transpose() * lambda)
}

pub fn project_bruteforce(chamber: Chamber, x: &[f64]) -> Result<ProjectionResult> {
    let n = chamber.dim();
    if n > BRUTE_FORCE_MAX_DIM {
        return Err(Error::TooLargeForBruteForce {
            n,
            max: BRUTE_FORCE_MAX_DIM,
        });
    }
    validate_input(chamber, x)?;
    let rows = constraint_rows(chamber);
    let xv = DVector::from_column_slice(x);
    let scale = 1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let feas_tol = 1e-10 * scale;
    let tie_tol = 1e-12 * scale * scale;

    let mut best: Option<(f64, usize, DVector<f64>)> = None;
    for mask in 0u32..(1 << rows.len()) {
        let active: Vec<&Vec<f64>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r)
            .collect();
        let Some(p) = project_onto_null_space(&xv, &active) else {
            continue;
        };
        let feasible = rows
            .iter()
            .all(|a| a.iter().zip(p.iter()).map(|(u, v)| u * v).sum::<f64>() >= -feas_tol);
        if !feasible {
            continue;
        }
        let dist = (&xv - &p).norm_squared();
        let better = match &best {
            None => true,
            Some((bd, bs, _)) => dist < bd - tie_tol || (dist <= bd + tie_tol && active.len() > *bs),
        };
        if better {
            best = Some((dist, active.len(), p));
        }
    }
    let (_, equalities, p) = best.expect("the apex face is always feasible");
    let point: Vec<f64> = p.iter().copied().collect();
    Ok(ProjectionResult {
        family: chamber.family(),
        blocks: runs(&point, feas_tol),
        face_dim: n - equalities,
        last_sign_flipped: chamber.family() == Family::D && point[n - 1] < 0.0,
        point,
    })
}

/// Runs of (numerically) equal coordinates; display only.
fn runs(point: &[f64], tol: f64) -> Vec<ProjectedBlock> {
    let mut out: Vec<ProjectedBlock> = Vec::new();
    for &v in point {
        match out.last_mut() {
            Some(b) if (b.value - v).abs() <= tol => b.len += 1,
            _ => out.push(ProjectedBlock { len: 1, value: v }),
        }
    }
    out
}
