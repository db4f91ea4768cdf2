use serde::{Deserialize, Serialize};

use super::rational::ExactRational;
use super::triangle::{row_total, triangle, IntegerTriangle, TriangleKind};
use crate::chambers::Family;
use crate::error::{Error, Result};

/// Exact conic intrinsic volumes `v_0, ..., v_n` of one chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub family: Family,
    pub n: usize,
    pub values: Vec<ExactRational>,
}

impl VolumeRow {
    pub fn total(&self) -> ExactRational {
        self.values.iter().sum()
    }

    pub fn get(&self, k: usize) -> ExactRational {
        self.values.get(k).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(ExactRational::to_f64).collect()
    }
}

impl Family {
    pub fn triangle_kind(self) -> TriangleKind {
        match self {
            Family::A => TriangleKind::StirlingFirst,
            Family::B => TriangleKind::BAnalogue,
            Family::D => TriangleKind::DAnalogue,
        }
    }
}

/// Intrinsic volumes of the chamber of `family` in ambient dimension `n`:
/// `s(n,k)/n!`, `B[n,k]/(2^n n!)` or `D[n,k]/(2^(n-1) n!)`.
pub fn intrinsic_volume_row(family: Family, n: usize) -> Result<VolumeRow> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { family, n, min: 1 });
    }
    let tri = triangle(family.triangle_kind(), n);
    Ok(row_from_triangle(family, &tri, n))
}

/// All rows `1..=n_max` sharing a single triangle computation.
pub fn intrinsic_volume_rows(family: Family, n_max: usize) -> Result<Vec<VolumeRow>> {
    if n_max == 0 {
        return Err(Error::DimensionTooSmall { family, n: 0, min: 1 });
    }
    let tri = triangle(family.triangle_kind(), n_max);
    Ok((1..=n_max).map(|n| row_from_triangle(family, &tri, n)).collect())
}

fn row_from_triangle(family: Family, tri: &IntegerTriangle, n: usize) -> VolumeRow {
    let total = row_total(tri.kind(), n);
    let values = tri
        .row(n)
        .iter()
        .map(|c| ExactRational::from_ratio(c, &total))
        .collect();
    VolumeRow { family, n, values }
}
