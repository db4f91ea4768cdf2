//! Signed permutations and their even-cycle statistic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::report::{counts_from_histogram, z_test, SimReport};
use crate::chambers::Family;
use crate::combinatorics::intrinsic_volume_row;
use crate::error::{Error, Result};
use crate::parallel::{sharded_histogram, Parallelism};

/// Largest `n` accepted by exhaustive enumeration (`2^n n!` elements).
pub const EXHAUSTIVE_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermKind {
    /// All of the hyperoctahedral group.
    Signed,
    /// Sign product `+1`.
    #[serde(rename = "dperm")]
    DPerm,
}

impl PermKind {
    pub fn family(self) -> Family {
        match self {
            PermKind::Signed => Family::B,
            PermKind::DPerm => Family::D,
        }
    }
}

impl fmt::Display for PermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermKind::Signed => "signed",
            PermKind::DPerm => "dperm",
        })
    }
}

impl FromStr for PermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "signed" | "b" => Ok(PermKind::Signed),
            "dperm" | "d" => Ok(PermKind::DPerm),
            _ => Err(Error::Invalid(format!("unknown permutation kind '{s}'"))),
        }
    }
}

/// A pair `(sigma, eps)`; `sigma` is stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    sigma: Vec<usize>,
    eps: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(sigma: Vec<usize>, eps: Vec<i8>) -> Result<Self> {
        let n = sigma.len();
        if eps.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: eps.len() });
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Invalid("sigma is not a bijection".into()));
            }
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Invalid("signs must be +1 or -1".into()));
        }
        Ok(Self { sigma, eps })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sigma: (0..n).collect(),
            eps: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    pub fn sign_product(&self) -> i8 {
        self.eps.iter().product()
    }

    pub fn is_d_permutation(&self) -> bool {
        self.sign_product() == 1
    }

    /// Cycles of `sigma`, each listed from its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.sigma[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycles whose signs multiply to `+1`.
    pub fn even_cycle_count(&self) -> usize {
        self.cycles()
            .iter()
            .filter(|c| c.iter().map(|&i| self.eps[i]).product::<i8>() == 1)
            .count()
    }

    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(rng);
        let eps = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        Self { sigma, eps }
    }

    /// Uniform on sign product `+1`: sample a signed permutation and flip
    /// the last sign if needed.
    pub fn sample_uniform_d<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::sample_uniform(n, rng);
        if n > 0 && !p.is_d_permutation() {
            p.eps[n - 1] = -p.eps[n - 1];
        }
        p
    }

    pub fn sample<R: Rng + ?Sized>(kind: PermKind, n: usize, rng: &mut R) -> Self {
        match kind {
            PermKind::Signed => Self::sample_uniform(n, rng),
            PermKind::DPerm => Self::sample_uniform_d(n, rng),
        }
    }
}

/// Every element of the group, in a fixed order.
pub fn enumerate(kind: PermKind, n: usize) -> impl Iterator<Item = SignedPermutation> {
    (0..n).permutations(n).flat_map(move |sigma| {
        (0u32..1 << n).filter_map(move |mask| {
            let eps: Vec<i8> = (0..n).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
            let p = SignedPermutation {
                sigma: sigma.clone(),
                eps,
            };
            (kind == PermKind::Signed || p.is_d_permutation()).then_some(p)
        })
    })
}

/// Even-cycle histogram over the whole group; index `k` counts elements
/// with `k` even cycles.
pub fn even_cycle_exhaustive(kind: PermKind, n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > EXHAUSTIVE_MAX_N {
        return Err(Error::Invalid(format!(
            "exhaustive enumeration needs 1 <= n <= {EXHAUSTIVE_MAX_N}"
        )));
    }
    let mut counts = vec![0u64; n + 1];
    for p in enumerate(kind, n) {
        counts[p.even_cycle_count()] += 1;
    }
    Ok(counts)
}

/// Even-cycle histogram of `trials` uniform group elements, tested against
/// the B or D row.
pub fn even_cycle_law(kind: PermKind, n: usize, trials: u64, seed: u64, par: Parallelism) -> Result<SimReport> {
    let row = intrinsic_volume_row(kind.family(), n)?;
    let hist = sharded_histogram(par, seed, trials, |rng| {
        SignedPermutation::sample(kind, n, rng).even_cycle_count()
    });
    let law: BTreeMap<_, _> = row.values.into_iter().enumerate().collect();
    z_test(format!("even-cycles {kind} n={n}"), seed, counts_from_histogram(&hist), law)
}
