//! Per-cell z-tests of empirical counts against an exact law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::ExactRational;
use crate::error::{Error, Result};

/// Cells fail when `|z|` exceeds this.
pub const Z_THRESHOLD: f64 = 4.0;
/// Cells with fewer expected hits than this are pooled.
pub const MIN_EXPECTED: f64 = 10.0;
pub const MIN_SAMPLES: u64 = 100;
/// Reported for outcomes that are impossible under the exact law.
pub const IMPOSSIBLE_Z: f64 = 1e9;

/// One tested cell: a single outcome or a pool of rare outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub outcomes: Vec<usize>,
    pub count: u64,
    pub probability: f64,
    pub expected: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub label: String,
    pub seed: u64,
    pub n_samples: u64,
    pub outcomes: BTreeMap<usize, u64>,
    pub exact_law: BTreeMap<usize, ExactRational>,
    /// z-score of the cell each outcome was tested in.
    pub z_scores: BTreeMap<usize, f64>,
    pub cells: Vec<Cell>,
    pub verdict: bool,
}

impl SimReport {
    pub fn frequency(&self, outcome: usize) -> f64 {
        self.outcomes.get(&outcome).copied().unwrap_or(0) as f64 / self.n_samples as f64
    }

    pub fn max_abs_z(&self) -> f64 {
        self.cells.iter().map(|c| c.z.abs()).fold(0.0, f64::max)
    }
}

/// Converts a dense histogram (index = outcome) to the sparse form.
pub fn counts_from_histogram(hist: &[u64]) -> BTreeMap<usize, u64> {
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, c))
        .collect()
}

fn z_score(count: u64, n: u64, p: f64) -> f64 {
    let expected = n as f64 * p;
    let variance = expected * (1.0 - p);
    if variance <= 0.0 {
        return if (count as f64 - expected).abs() < 0.5 { 0.0 } else { IMPOSSIBLE_Z };
    }
    (count as f64 - expected) / variance.sqrt()
}

/// Tests `counts` against `law` cell by cell.
///
/// Outcomes with `N p < MIN_EXPECTED` are pooled into one tail cell; if the
/// pooled tail is still below the threshold it is merged into the
/// smallest remaining cell. Observed outcomes of probability zero fail
/// outright.
pub fn z_test(
    label: impl Into<String>,
    seed: u64,
    counts: BTreeMap<usize, u64>,
    law: BTreeMap<usize, ExactRational>,
) -> Result<SimReport> {
    let total: ExactRational = law.values().sum();
    if !total.is_one() {
        return Err(Error::LawNotNormalized(total.to_string()));
    }
    let n: u64 = counts.values().sum();
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: n });
    }
    let nf = n as f64;
    let prob = |k: &usize| law.get(k).map_or(0.0, ExactRational::to_f64);
    let count = |k: &usize| counts.get(k).copied().unwrap_or(0);

    let mut cells: Vec<Cell> = Vec::new();
    let mut tail: Vec<usize> = Vec::new();
    let mut impossible: Vec<usize> = Vec::new();
    for k in law.keys().chain(counts.keys().filter(|k| !law.contains_key(k))) {
        let p = prob(k);
        if p == 0.0 {
            if count(k) > 0 {
                impossible.push(*k);
            }
        } else if nf * p < MIN_EXPECTED {
            tail.push(*k);
        } else {
            cells.push(Cell {
                outcomes: vec![*k],
                count: count(k),
                probability: p,
                expected: 0.0,
                z: 0.0,
            });
        }
    }
    if !tail.is_empty() {
        let pooled = Cell {
            count: tail.iter().map(count).sum(),
            probability: tail.iter().map(prob).sum(),
            outcomes: tail,
            expected: 0.0,
            z: 0.0,
        };
        if nf * pooled.probability < MIN_EXPECTED && !cells.is_empty() {
            let host = cells
                .iter_mut()
                .min_by(|a, b| a.probability.total_cmp(&b.probability))
                .expect("non-empty");
            host.outcomes.extend(pooled.outcomes);
            host.outcomes.sort_unstable();
            host.count += pooled.count;
            host.probability += pooled.probability;
        } else {
            cells.push(pooled);
        }
    }
    for c in &mut cells {
        c.expected = nf * c.probability;
        c.z = z_score(c.count, n, c.probability);
    }
    if !impossible.is_empty() {
        cells.push(Cell {
            count: impossible.iter().map(count).sum(),
            outcomes: impossible,
            probability: 0.0,
            expected: 0.0,
            z: IMPOSSIBLE_Z,
        });
    }
    cells.sort_by_key(|c| c.outcomes[0]);

    let z_scores = cells
        .iter()
        .flat_map(|c| c.outcomes.iter().map(move |&k| (k, c.z)))
        .collect();
    let verdict = cells.iter().all(|c| c.z.abs() <= Z_THRESHOLD);
    Ok(SimReport {
        label: label.into(),
        seed,
        n_samples: n,
        outcomes: counts,
        exact_law: law,
        z_scores,
        cells,
        verdict,
    })
}

/// Law of a binary event with probability `p` (outcome 1) as a map.
pub fn bernoulli_law(p: ExactRational) -> BTreeMap<usize, ExactRational> {
    let q = ExactRational::one() - p.clone();
    BTreeMap::from([(0, q), (1, p)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(ps: &[(usize, i64, i64)]) -> BTreeMap<usize, ExactRational> {
        ps.iter().map(|&(k, p, q)| (k, ExactRational::new(p, q))).collect()
    }

    #[test]
    fn exact_counts_pass_with_zero_z() {
        let counts = BTreeMap::from([(0, 250), (1, 500), (2, 250)]);
        let r = z_test("t", 0, counts, law(&[(0, 1, 4), (1, 1, 2), (2, 1, 4)])).unwrap();
        assert!(r.verdict);
        assert!(r.cells.iter().all(|c| c.z == 0.0));
        assert_eq!(r.z_scores.len(), 3);
    }

    #[test]
    fn large_deviation_fails() {
        // N = 10000, p = 1/2: sd = 50; shift one cell by 10 sd.
        let counts = BTreeMap::from([(0, 5500), (1, 4500)]);
        let r = z_test("t", 0, counts, law(&[(0, 1, 2), (1, 1, 2)])).unwrap();
        assert!(!r.verdict);
        assert!((r.z_scores[&0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rare_cells_are_pooled() {
        // N = 1000: outcomes 2 and 3 expect 5 and 3 hits; pooled they expect
        // 8 (< 10), so they join the smallest regular cell (outcome 1).
        let l = law(&[(0, 900, 1000), (1, 92, 1000), (2, 5, 1000), (3, 3, 1000)]);
        let counts = BTreeMap::from([(0, 900), (1, 92), (2, 5), (3, 3)]);
        let r = z_test("t", 0, counts, l).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert_eq!(r.cells[1].outcomes, vec![1, 2, 3]);
        assert!((r.cells[1].probability - 0.1).abs() < 1e-12);
        assert!(r.verdict);

        // With enough mass the tail stands alone.
        let l = law(&[(0, 980, 1000), (1, 6, 1000), (2, 7, 1000), (3, 7, 1000)]);
        let counts = BTreeMap::from([(0, 980), (1, 6), (2, 7), (3, 7)]);
        let r = z_test("t", 0, counts, l).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert_eq!(r.cells[1].outcomes, vec![1, 2, 3]);
        assert_eq!(r.z_scores[&2], r.z_scores[&3]);
    }

    #[test]
    fn impossible_outcome_fails() {
        let counts = BTreeMap::from([(0, 999), (5, 1)]);
        let r = z_test("t", 0, counts, law(&[(0, 1, 1)])).unwrap();
        assert!(!r.verdict);
        let counts = BTreeMap::from([(0, 1000)]);
        let r = z_test("t", 0, counts, law(&[(0, 1, 1), (1, 0, 1)])).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn errors() {
        let counts = BTreeMap::from([(0, 1000)]);
        assert!(matches!(
            z_test("t", 0, counts, law(&[(0, 1, 2)])),
            Err(Error::LawNotNormalized(_))
        ));
        let counts = BTreeMap::from([(0, 10)]);
        assert!(matches!(
            z_test("t", 0, counts, law(&[(0, 1, 1)])),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let counts = BTreeMap::from([(0, 2500), (1, 5100), (2, 2400), (11, 0)]);
        let r = z_test("t", 7, counts, law(&[(0, 1, 4), (1, 1, 2), (2, 1, 4)])).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: SimReport = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
