//! Face structure, normal cones and angles of the chambers
//!
//! * `A`: `{b_1 >= b_2 >= ... >= b_n}`
//! * `B`: `{b_1 >= ... >= b_n >= 0}`
//! * `D`: `{b_1 >= ... >= b_{n-1} >= |b_n|}`
//!
//! Faces are described by the positions `l_1 < ... < l_j` where the chain of
//! inequalities is cut into blocks of equal coordinates. The normal cone of a
//! face splits orthogonally into "bridge" cones `D_m` (partial sums `<= 0`,
//! total sum `= 0`) and at most one trailing "walk" cone `B_m` (all partial
//! sums `<= 0`). Their solid angles are `1/m` and `C(2m,m)/4^m`.
//!
//! Face operations are only available for `A` and `B`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::combinatorics::triangle::binomial;
use crate::combinatorics::ExactRational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::D];

    /// Smallest admissible ambient dimension.
    pub fn min_dimension(self) -> usize {
        match self {
            Family::A | Family::B => 1,
            Family::D => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            _ => Err(Error::Invalid(format!("unknown family `{s}` (expected A, B or D)"))),
        }
    }
}

/// A Weyl chamber of the given family in `R^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chamber {
    family: Family,
    n: usize,
}

impl Chamber {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let min = family.min_dimension();
        if n < min {
            return Err(Error::DimensionTooSmall { family, n, min });
        }
        Ok(Self { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn require_face_lattice(&self) -> Result<()> {
        match self.family {
            Family::D => Err(Error::FaceLatticeUnavailable),
            _ => Ok(()),
        }
    }

    /// Whether `x` satisfies the defining inequalities up to `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.max_violation(x) <= tol
    }

    /// Largest violation of a defining inequality (zero inside the chamber).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let chain = x.windows(2).map(|w| w[1] - w[0]).fold(0.0_f64, f64::max);
        let n = x.len();
        match self.family {
            Family::A => chain,
            Family::B => chain.max(-x[n - 1]),
            Family::D => {
                let upper = x[..n - 1].windows(2).map(|w| w[1] - w[0]).fold(0.0_f64, f64::max);
                upper.max(x[n - 1].abs() - x[n - 2])
            }
        }
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.n)
    }
}

/// One face of an `A` or `B` chamber.
///
/// For `A`, `ls = (l_1, ..., l_{k-1})` with `1 <= l_1 < ... <= n-1` selects
/// the `k`-face `b_1 = .. = b_{l_1} >= b_{l_1+1} = .. = b_{l_2} >= ...`; the
/// empty tuple is the line `b_1 = .. = b_n`. For `B`, `ls = (l_1, ..., l_k)`
/// with `l_k <= n` selects the `k`-face whose coordinates after `l_k` vanish;
/// the empty tuple is the origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceIndex {
    chamber: Chamber,
    ls: Vec<usize>,
}

impl FaceIndex {
    pub fn new(chamber: Chamber, ls: Vec<usize>) -> Result<Self> {
        chamber.require_face_lattice()?;
        let n = chamber.n;
        let invalid = |reason| Error::InvalidFace {
            family: chamber.family,
            n,
            ls: ls.clone(),
            reason,
        };
        if !ls.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("indices must be strictly increasing"));
        }
        if ls.first().is_some_and(|&l| l == 0) {
            return Err(invalid("indices start at 1"));
        }
        let upper = match chamber.family {
            Family::A => n - 1,
            _ => n,
        };
        if ls.last().is_some_and(|&l| l > upper) {
            return Err(invalid("index exceeds the last admissible position"));
        }
        Ok(Self { chamber, ls })
    }

    pub fn chamber(&self) -> Chamber {
        self.chamber
    }

    pub fn ls(&self) -> &[usize] {
        &self.ls
    }

    /// Dimension of the face.
    pub fn dim(&self) -> usize {
        match self.chamber.family {
            Family::A => self.ls.len() + 1,
            _ => self.ls.len(),
        }
    }

    /// Lengths `i_1, ..., i_k` of the blocks of equal (nonzero) coordinates.
    pub fn gaps(&self) -> Vec<usize> {
        let end = match self.chamber.family {
            Family::A => Some(self.chamber.n),
            _ => None,
        };
        std::iter::once(0)
            .chain(self.ls.iter().copied())
            .chain(end)
            .tuple_windows()
            .map(|(a, b)| b - a)
            .collect()
    }

    /// Number of trailing zero coordinates (`B` only; zero for `A`).
    pub fn zero_tail(&self) -> usize {
        match self.chamber.family {
            Family::A => 0,
            _ => self.chamber.n - self.ls.last().copied().unwrap_or(0),
        }
    }
}

impl fmt::Display for FaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.chamber, self.ls.iter().join(","))
    }
}

/// All `k`-faces in lexicographic order of `ls`.
pub fn enumerate_faces(chamber: Chamber, k: usize) -> Result<Vec<FaceIndex>> {
    chamber.require_face_lattice()?;
    let n = chamber.n;
    if k > n {
        return Err(Error::FaceDimensionOutOfRange { k, n });
    }
    let (pool, choose) = match chamber.family {
        Family::A if k == 0 => return Ok(Vec::new()),
        Family::A => (1..n, k - 1),
        _ => (1..n + 1, k),
    };
    Ok(pool
        .combinations(choose)
        .map(|ls| FaceIndex { chamber, ls })
        .collect())
}

/// Every face of the chamber, grouped by increasing dimension.
pub fn all_faces(chamber: Chamber) -> Result<Vec<FaceIndex>> {
    let mut out = Vec::new();
    for k in 0..=chamber.n {
        out.extend(enumerate_faces(chamber, k)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    /// Bridge cone `D_m`: partial sums `<= 0`, total sum `= 0`.
    Bridge(usize),
    /// Walk cone `B_m`: all partial sums `<= 0`; `B_0 = {0}`.
    Walk(usize),
}

impl Block {
    pub fn size(self) -> usize {
        match self {
            Block::Bridge(m) | Block::Walk(m) => m,
        }
    }

    /// Exact solid angle: `1/m` for a bridge, `C(2m,m)/4^m` for a walk.
    pub fn solid_angle(self) -> ExactRational {
        match self {
            Block::Bridge(m) => ExactRational::new(1, m as i64),
            Block::Walk(m) => ExactRational::from_ratio(&binomial(2 * m, m), &(BigUint::from(1u32) << (2 * m))),
        }
    }
}

/// Orthogonal product structure of a normal cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(|b| b.size()).sum()
    }
}

pub fn normal_block_decomposition(face: &FaceIndex) -> BlockDecomposition {
    let mut blocks: Vec<Block> = face.gaps().into_iter().map(Block::Bridge).collect();
    if face.chamber.family == Family::B {
        blocks.push(Block::Walk(face.zero_tail()));
    }
    BlockDecomposition { blocks }
}

/// Solid angle of the normal cone of `face`.
pub fn external_angle_exact(face: &FaceIndex) -> ExactRational {
    normal_block_decomposition(face)
        .blocks
        .into_iter()
        .map(Block::solid_angle)
        .fold(ExactRational::one(), |acc, a| acc * a)
}

/// Internal angle of a face as a Gaussian chain probability
/// `P(xi_1/sqrt(i_1) >= ... >= xi_k/sqrt(i_k) [>= 0])` with iid standard
/// normal `xi_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthantDescriptor {
    pub family: Family,
    pub gaps: Vec<usize>,
    /// Whether the chain ends in `>= 0` (family B).
    pub nonnegative_tail: bool,
}

impl OrthantDescriptor {
    /// Number of inequalities in the chain.
    pub fn constraint_count(&self) -> usize {
        self.gaps.len().saturating_sub(1) + usize::from(self.nonnegative_tail && !self.gaps.is_empty())
    }

    /// True when the event holds surely (angle exactly 1).
    pub fn is_certain(&self) -> bool {
        self.constraint_count() == 0
    }

    /// Whether the chain event holds for the given `xi` (length `gaps.len()`).
    pub fn event(&self, xi: &[f64]) -> bool {
        let mut prev = f64::INFINITY;
        for (&x, &i) in xi.iter().zip(&self.gaps) {
            let v = x / (i as f64).sqrt();
            if v > prev {
                return false;
            }
            prev = v;
        }
        !self.nonnegative_tail || prev >= 0.0
    }

    /// Closed form for chains with at most two variables.
    pub fn closed_form(&self) -> Option<f64> {
        match (self.gaps.as_slice(), self.nonnegative_tail) {
            ([] | [_], false) | ([], true) => Some(1.0),
            ([_, _], false) | ([_], true) => Some(0.5),
            // Planar wedge between the positive xi_1 axis and the ray
            // xi_1 = xi_2 sqrt(a/b).
            (&[a, b], true) => Some((b as f64 / a as f64).sqrt().atan() / (2.0 * PI)),
            _ => None,
        }
    }
}

pub fn internal_angle_spec(face: &FaceIndex) -> OrthantDescriptor {
    OrthantDescriptor {
        family: face.chamber.family,
        gaps: face.gaps(),
        nonnegative_tail: face.chamber.family == Family::B,
    }
}

/// A numeric estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl AngleEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }
}

/// `v_k = sum over k-faces F of (internal angle of F) * (external angle at F)`,
/// with standard errors combined as independent.
pub fn reconstruct_volume(
    chamber: Chamber,
    k: usize,
    internal_angles: &BTreeMap<FaceIndex, AngleEstimate>,
) -> Result<AngleEstimate> {
    let mut value = 0.0;
    let mut variance = 0.0;
    for face in enumerate_faces(chamber, k)? {
        let internal = internal_angles
            .get(&face)
            .ok_or_else(|| Error::MissingFace(face.to_string()))?;
        let external = external_angle_exact(&face).to_f64();
        value += external * internal.value;
        variance += (external * internal.std_error).powi(2);
    }
    Ok(AngleEstimate {
        value,
        std_error: variance.sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `x_1 + ... + x_len <= 0`
    AtMostZero,
    /// `x_1 + ... + x_len = 0`
    EqualZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSumConstraint {
    pub len: usize,
    pub relation: Relation,
}

impl fmt::Display for PartialSumConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = (1..=self.len).map(|i| format!("x_{i}")).join("+");
        let op = match self.relation {
            Relation::AtMostZero => "<=",
            Relation::EqualZero => "=",
        };
        write!(f, "{terms} {op} 0")
    }
}

/// Partial-sum description of the polar cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualConeDescription {
    pub n: usize,
    pub constraints: Vec<PartialSumConstraint>,
}

impl DualConeDescription {
    /// Largest violation of any constraint by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut prefix = Vec::with_capacity(x.len());
        let mut acc = 0.0;
        for v in x {
            acc += v;
            prefix.push(acc);
        }
        self.constraints
            .iter()
            .map(|c| {
                let s = prefix[c.len - 1];
                match c.relation {
                    Relation::AtMostZero => s.max(0.0),
                    Relation::EqualZero => s.abs(),
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.max_violation(x) <= tol
    }
}

pub fn dual_cone_description(chamber: Chamber) -> Result<DualConeDescription> {
    chamber.require_face_lattice()?;
    let n = chamber.n;
    let constraints = (1..=n)
        .map(|len| PartialSumConstraint {
            len,
            relation: if len == n && chamber.family == Family::A {
                Relation::EqualZero
            } else {
                Relation::AtMostZero
            },
        })
        .collect();
    Ok(DualConeDescription { n, constraints })
}
