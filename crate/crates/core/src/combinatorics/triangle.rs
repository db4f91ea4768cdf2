//! Stirling numbers of the first kind and their B- and D-analogues.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::polynomial::{product_of_linear, IntegerPolynomial};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleKind {
    /// Unsigned Stirling numbers of the first kind, coefficients of
    /// `t(t+1)...(t+n-1)`.
    StirlingFirst,
    /// Coefficients of `(t+1)(t+3)...(t+2n-1)`.
    BAnalogue,
    /// Coefficients of `(t+1)(t+3)...(t+2n-3)(t+n-1)`.
    DAnalogue,
}

impl TriangleKind {
    pub const ALL: [TriangleKind; 3] = [
        TriangleKind::StirlingFirst,
        TriangleKind::BAnalogue,
        TriangleKind::DAnalogue,
    ];

    /// Shifts `c` of the linear factors `t + c` whose product defines row `n`.
    ///
    /// Row 0 is the empty product for every kind. For the D-analogue this is
    /// our own convention (`D[0,0] = 1`).
    pub fn factor_shifts(self, n: usize) -> Vec<u64> {
        let n64 = n as u64;
        match self {
            TriangleKind::StirlingFirst => (0..n64).collect(),
            TriangleKind::BAnalogue => (1..=n64).map(|j| 2 * j - 1).collect(),
            TriangleKind::DAnalogue if n == 0 => Vec::new(),
            TriangleKind::DAnalogue => (1..n64).map(|j| 2 * j - 1).chain([n64 - 1]).collect(),
        }
    }
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriangleKind::StirlingFirst => "stirling",
            TriangleKind::BAnalogue => "b",
            TriangleKind::DAnalogue => "d",
        })
    }
}

impl FromStr for TriangleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "stirling" | "stirling-first" | "a" => Ok(TriangleKind::StirlingFirst),
            "b" | "b-analogue" => Ok(TriangleKind::BAnalogue),
            "d" | "d-analogue" => Ok(TriangleKind::DAnalogue),
            _ => Err(Error::Invalid(format!("unknown triangle kind `{s}`"))),
        }
    }
}

/// Triangular array `rows[n][k]`, `0 <= k <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerTriangle {
    kind: TriangleKind,
    rows: Vec<Vec<BigUint>>,
}

impl IntegerTriangle {
    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    /// Entry `(n, k)`; zero when `k > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows[n].get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    /// `get(n, k - 1)` with the convention that index `-1` is zero.
    fn get_below(&self, n: usize, k: usize) -> BigUint {
        k.checked_sub(1).map_or_else(BigUint::zero, |k| self.get(n, k))
    }
}

/// Expands the defining product of row `n` by iterated exact multiplication.
pub fn expand_defining_polynomial(kind: TriangleKind, n: usize) -> IntegerPolynomial {
    product_of_linear(kind.factor_shifts(n).into_iter().map(BigInt::from))
}

/// Builds rows `0..=n_max` by the three-term recurrences.
///
/// * `s(n,k) = (n-1) s(n-1,k) + s(n-1,k-1)`
/// * `B[n,k] = (2n-1) B[n-1,k] + B[n-1,k-1]`
/// * `D[n,k] = (n-1) B[n-1,k] + B[n-1,k-1]`
pub fn triangle(kind: TriangleKind, n_max: usize) -> IntegerTriangle {
    match kind {
        TriangleKind::StirlingFirst => recurrence(kind, n_max, |n| (n - 1) as u64),
        TriangleKind::BAnalogue => recurrence(kind, n_max, |n| (2 * n - 1) as u64),
        TriangleKind::DAnalogue => {
            let b = triangle(TriangleKind::BAnalogue, n_max.saturating_sub(1));
            let mut rows = vec![vec![BigUint::one()]];
            for n in 1..=n_max {
                let mult = BigUint::from((n - 1) as u64);
                let row = (0..=n)
                    .map(|k| &mult * b.get(n - 1, k) + b.get_below(n - 1, k))
                    .collect();
                rows.push(row);
            }
            IntegerTriangle { kind, rows }
        }
    }
}

fn recurrence(kind: TriangleKind, n_max: usize, mult: impl Fn(usize) -> u64) -> IntegerTriangle {
    let mut tri = IntegerTriangle {
        kind,
        rows: vec![vec![BigUint::one()]],
    };
    for n in 1..=n_max {
        let m = BigUint::from(mult(n));
        let row = (0..=n)
            .map(|k| &m * tri.get(n - 1, k) + tri.get_below(n - 1, k))
            .collect();
        tri.rows.push(row);
    }
    tri
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Each prefix product is divisible by i! so the division is exact.
    (1..=k as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - k as u64 + i) / i)
}

/// `n! / (n - r)!`
pub fn falling_factorial(n: usize, r: usize) -> BigUint {
    (0..r as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - i))
}

/// `(2n-1)!! = 1 * 3 * ... * (2n-1)`, equal to 1 for `n = 0`.
pub fn odd_double_factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, j| acc * (2 * j - 1))
}

/// Row normalizer: `n!`, `2^n n!` or `2^(n-1) n!` (group order).
pub fn row_total(kind: TriangleKind, n: usize) -> BigUint {
    let f = factorial(n);
    match kind {
        TriangleKind::StirlingFirst => f,
        TriangleKind::BAnalogue => f << n,
        TriangleKind::DAnalogue if n == 0 => BigUint::one(),
        TriangleKind::DAnalogue => f << (n - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn defining_polynomials_small_rows() {
        assert_eq!(expand_defining_polynomial(TriangleKind::StirlingFirst, 3).coeffs(), ints(&[0, 2, 3, 1]).as_slice());
        assert_eq!(expand_defining_polynomial(TriangleKind::BAnalogue, 2).coeffs(), ints(&[3, 4, 1]).as_slice());
        assert_eq!(expand_defining_polynomial(TriangleKind::DAnalogue, 2).coeffs(), ints(&[1, 2, 1]).as_slice());
        assert_eq!(expand_defining_polynomial(TriangleKind::StirlingFirst, 0).coeffs(), ints(&[1]).as_slice());
        assert_eq!(expand_defining_polynomial(TriangleKind::DAnalogue, 0).coeffs(), ints(&[1]).as_slice());
        assert_eq!(expand_defining_polynomial(TriangleKind::DAnalogue, 1).coeffs(), ints(&[0, 1]).as_slice());
    }

    #[test]
    fn recurrence_small_rows() {
        assert_eq!(triangle(TriangleKind::BAnalogue, 2).row(2), big(&[3, 4, 1]).as_slice());
        assert_eq!(triangle(TriangleKind::DAnalogue, 2).row(2), big(&[1, 2, 1]).as_slice());
        assert_eq!(triangle(TriangleKind::StirlingFirst, 1).row(1), big(&[0, 1]).as_slice());
        assert_eq!(triangle(TriangleKind::StirlingFirst, 0).row(0), big(&[1]).as_slice());
        // s(5, .) = 0, 24, 50, 35, 10, 1
        assert_eq!(triangle(TriangleKind::StirlingFirst, 5).row(5), big(&[0, 24, 50, 35, 10, 1]).as_slice());
    }

    #[test]
    fn d_row_two_from_b_difference() {
        let b = triangle(TriangleKind::BAnalogue, 2);
        let d = triangle(TriangleKind::DAnalogue, 2);
        for k in 0..=2 {
            let lhs = BigInt::from(d.get(2, k));
            let rhs = BigInt::from(b.get(2, k)) - BigInt::from(2u32) * BigInt::from(b.get(1, k));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn recurrence_equals_expansion() {
        for kind in TriangleKind::ALL {
            let tri = triangle(kind, 40);
            for n in 0..=40 {
                let poly = expand_defining_polynomial(kind, n);
                for k in 0..=n {
                    assert_eq!(BigInt::from(tri.get(n, k)), poly.coeff(k), "{kind} n={n} k={k}");
                }
                assert_eq!(poly.degree(), Some(n));
            }
        }
    }

    #[test]
    fn row_invariants() {
        let n_max = 30;
        let s = triangle(TriangleKind::StirlingFirst, n_max);
        let b = triangle(TriangleKind::BAnalogue, n_max);
        let d = triangle(TriangleKind::DAnalogue, n_max);
        for n in 0..=n_max {
            let sum = |t: &IntegerTriangle| t.row(n).iter().sum::<BigUint>();
            assert_eq!(sum(&s), row_total(TriangleKind::StirlingFirst, n));
            assert_eq!(sum(&b), row_total(TriangleKind::BAnalogue, n));
            assert_eq!(sum(&d), row_total(TriangleKind::DAnalogue, n));
            assert_eq!(s.get(n, n), BigUint::one());
            assert_eq!(b.get(n, n), BigUint::one());
            assert_eq!(d.get(n, n), BigUint::one());
            assert_eq!(s.row(n).len(), n + 1);
            if n >= 1 {
                assert!(s.get(n, 0).is_zero());
                assert_eq!(b.get(n, 0), odd_double_factorial(n));
            }
            assert!(s.get(n, n + 3).is_zero());
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(binomial(8, 4), BigUint::from(70u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(falling_factorial(6, 2), BigUint::from(30u32));
        assert_eq!(odd_double_factorial(4), BigUint::from(105u32));
        assert_eq!(factorial(0), BigUint::one());
    }
}
