//! Exact checks of the closed-form identities relating the three triangles.
//!
//! Every check compares two independent routes to the same integers and
//! records each `(n, k)` where they disagree. Nothing here uses floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::polynomial::{product_of_linear, RationalPolynomial};
use super::triangle::{binomial, expand_defining_polynomial, factorial, falling_factorial, triangle, TriangleKind};
use crate::error::{Error, Result};

/// Largest `n` for which compositions are enumerated exhaustively.
pub const COMPOSITION_N_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `B[n,k] = sum_{i=k}^{n} 2^(n-i) C(i,k) s(n,i)`
    BFromStirling,
    /// `B[n,k] = sum_{r=0}^{n-k} 2^(n-k-2r) C(2r,r) s(n-r,k) n!/(n-r)!`
    BCatalanSum,
    /// `s(n,k) = n!/k! * sum over compositions i_1+..+i_k = n of 1/(i_1...i_k)`
    StirlingCompositionSum,
    /// `D[n,k] = B[n,k] - n B[n-1,k] = (n-1) B[n-1,k] + B[n-1,k-1]`
    DFromBBothForms,
    /// `sum_k B[n,k] y^k = 2^n u(u+1)...(u+n-1)` with `u = (y+1)/2`
    RisingFactorialGf,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::BFromStirling,
        Identity::BCatalanSum,
        Identity::StirlingCompositionSum,
        Identity::DFromBBothForms,
        Identity::RisingFactorialGf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::BFromStirling => "b_from_stirling",
            Identity::BCatalanSum => "b_catalan_sum",
            Identity::StirlingCompositionSum => "stirling_composition_sum",
            Identity::DFromBBothForms => "d_from_b_both_forms",
            Identity::RisingFactorialGf => "rising_factorial_gf",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub n_max: usize,
    /// `(n, k)` cells where the two sides differ.
    pub failures: Vec<(usize, usize)>,
    /// Rows that were not checked, with the reason.
    pub skipped: Vec<SkippedRow>,
    /// Number of `(n, k)` cells actually compared.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub n: usize,
    pub reason: String,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Looks up an identity by name and checks it for all `0 <= k <= n <= n_max`.
pub fn verify_identity_by_name(name: &str, n_max: usize) -> Result<IdentityReport> {
    verify_identity(name.parse()?, n_max)
}

pub fn verify_identity(identity: Identity, n_max: usize) -> Result<IdentityReport> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let mut report = IdentityReport {
        identity,
        n_max,
        failures: Vec::new(),
        skipped: Vec::new(),
        checked: 0,
    };
    match identity {
        Identity::BFromStirling => b_from_stirling(n_max, &mut report),
        Identity::BCatalanSum => b_catalan_sum(n_max, &mut report),
        Identity::StirlingCompositionSum => stirling_composition_sum(n_max, &mut report),
        Identity::DFromBBothForms => d_from_b_both_forms(n_max, &mut report),
        Identity::RisingFactorialGf => rising_factorial_gf(n_max, &mut report),
    }
    Ok(report)
}

impl IdentityReport {
    fn compare<T: PartialEq>(&mut self, n: usize, k: usize, lhs: &T, rhs: &T) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push((n, k));
        }
    }
}

fn b_from_stirling(n_max: usize, report: &mut IdentityReport) {
    let s = triangle(TriangleKind::StirlingFirst, n_max);
    let b = triangle(TriangleKind::BAnalogue, n_max);
    for n in 0..=n_max {
        for k in 0..=n {
            let rhs: BigUint = (k..=n)
                .map(|i| (binomial(i, k) * s.get(n, i)) << (n - i))
                .sum();
            report.compare(n, k, &b.get(n, k), &rhs);
        }
    }
}

// Both sides are scaled by 4^(n-k) so every power of two is a nonnegative
// integer exponent: 4^(n-k) B[n,k] = sum_r 2^(3(n-k)-2r) C(2r,r) s(n-r,k) n!/(n-r)!
fn b_catalan_sum(n_max: usize, report: &mut IdentityReport) {
    let s = triangle(TriangleKind::StirlingFirst, n_max);
    let b = triangle(TriangleKind::BAnalogue, n_max);
    for n in 0..=n_max {
        for k in 0..=n {
            let d = n - k;
            let rhs: BigUint = (0..=d)
                .map(|r| (binomial(2 * r, r) * s.get(n - r, k) * falling_factorial(n, r)) << (3 * d - 2 * r))
                .sum();
            let lhs = b.get(n, k) << (2 * d);
            report.compare(n, k, &lhs, &rhs);
        }
    }
}

// k! s(n,k) = sum over compositions of n!/(i_1 ... i_k); the summands are
// integers because i_1 ... i_k divides i_1! ... i_k!, which divides n!.
fn stirling_composition_sum(n_max: usize, report: &mut IdentityReport) {
    let s = triangle(TriangleKind::StirlingFirst, n_max);
    for n in 0..=n_max {
        if n > COMPOSITION_N_LIMIT {
            report.skipped.push(SkippedRow {
                n,
                reason: format!("composition enumeration limited to n <= {COMPOSITION_N_LIMIT}"),
            });
            continue;
        }
        let sums = composition_sums(n);
        for (k, rhs) in sums.iter().enumerate() {
            let lhs = factorial(k) * s.get(n, k);
            report.compare(n, k, &lhs, rhs);
        }
    }
}

/// `sums[k] = sum over compositions (i_1..i_k) of n of n!/(i_1 ... i_k)`.
pub fn composition_sums(n: usize) -> Vec<BigUint> {
    let n_fact = factorial(n);
    let mut sums = vec![BigUint::zero(); n + 1];
    if n == 0 {
        // The empty composition of 0.
        sums[0] = BigUint::one();
        return sums;
    }
    // Part products fit in u128 for n <= COMPOSITION_N_LIMIT; group equal
    // products so the big-integer division runs once per distinct product.
    let mut stack: Vec<(usize, usize, u128)> = vec![(0, 0, 1)];
    let mut by_product: Vec<std::collections::HashMap<u128, u64>> = vec![Default::default(); n + 1];
    while let Some((used, parts, product)) = stack.pop() {
        if used == n {
            *by_product[parts].entry(product).or_insert(0) += 1;
            continue;
        }
        for next in 1..=n - used {
            stack.push((used + next, parts + 1, product * next as u128));
        }
    }
    for (k, products) in by_product.into_iter().enumerate() {
        for (product, count) in products {
            sums[k] += (&n_fact / BigUint::from(product)) * count;
        }
    }
    sums
}

// Compared against the defining product of D, not the recurrence (which is
// one of the two forms being checked).
fn d_from_b_both_forms(n_max: usize, report: &mut IdentityReport) {
    let b = triangle(TriangleKind::BAnalogue, n_max);
    for n in 1..=n_max {
        let d = expand_defining_polynomial(TriangleKind::DAnalogue, n);
        for k in 0..=n {
            let bi = |m: usize, j: Option<usize>| j.map_or_else(BigInt::zero, |j| BigInt::from(b.get(m, j)));
            let first = bi(n, Some(k)) - BigInt::from(n) * bi(n - 1, Some(k));
            let second = BigInt::from(n - 1) * bi(n - 1, Some(k)) + bi(n - 1, k.checked_sub(1));
            let target = d.coeff(k);
            report.checked += 1;
            if first != target || second != target {
                report.failures.push((n, k));
            }
        }
    }
}

fn rising_factorial_gf(n_max: usize, report: &mut IdentityReport) {
    let b = triangle(TriangleKind::BAnalogue, n_max);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for n in 0..=n_max {
        // prod_j (x + 1/2 + j) evaluated at x = y/2 is prod_j ((y+1)/2 + j).
        let shifted: RationalPolynomial =
            product_of_linear((0..n).map(|j| BigRational::from_integer(BigInt::from(j)) + &half));
        let rhs = substitute_half_y(&shifted);
        let rhs = rhs.scale(&BigRational::from_integer(BigInt::one() << n));
        for k in 0..=n {
            let lhs = BigRational::from_integer(BigInt::from(b.get(n, k)));
            report.compare(n, k, &lhs, &rhs.coeff(k));
        }
    }
}

/// Coefficients of `p(y/2)` as a polynomial in `y`.
fn substitute_half_y(p: &RationalPolynomial) -> RationalPolynomial {
    let mut scale = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| {
            let out = c * &scale;
            scale = &scale * &half;
            out
        })
        .collect();
    RationalPolynomial::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!(matches!(verify_identity_by_name("nope", 3), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn b_from_stirling_worked_example() {
        // B[2,1] = 2^1 C(1,1) s(2,1) + 2^0 C(2,1) s(2,2) = 2 + 2 = 4
        let s = triangle(TriangleKind::StirlingFirst, 2);
        let rhs = (binomial(1, 1) * s.get(2, 1)) * 2u32 + binomial(2, 1) * s.get(2, 2);
        assert_eq!(rhs, BigUint::from(4u32));
        assert!(verify_identity(Identity::BFromStirling, 2).unwrap().passed());
    }

    #[test]
    fn composition_worked_example() {
        // Compositions of 3 into 2 parts: (1,2), (2,1); 3!/(1*2) * 2 = 6 = 2! s(3,2).
        let sums = composition_sums(3);
        assert_eq!(sums[2], BigUint::from(6u32));
        assert_eq!(sums[2].clone() / 2u32, BigUint::from(3u32));
        assert_eq!(composition_sums(0), vec![BigUint::one()]);
    }

    #[test]
    fn d_base_case() {
        let report = verify_identity(Identity::DFromBBothForms, 1).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked, 2);
    }

    #[test]
    fn all_identities_small() {
        for id in Identity::ALL {
            let report = verify_identity(id, 24).unwrap();
            assert!(report.passed(), "{id}: {:?}", report.failures);
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn composition_rows_above_limit_are_reported_skipped() {
        let report = verify_identity(Identity::StirlingCompositionSum, 22).unwrap();
        assert!(report.passed());
        assert_eq!(report.skipped.iter().map(|s| s.n).collect::<Vec<_>>(), vec![21, 22]);
    }

    #[test]
    fn detects_a_broken_identity() {
        // Sanity check of the comparison plumbing itself.
        let mut report = IdentityReport {
            identity: Identity::BFromStirling,
            n_max: 1,
            failures: vec![],
            skipped: vec![],
            checked: 0,
        };
        report.compare(1, 0, &BigUint::from(1u32), &BigUint::from(2u32));
        assert!(!report.passed());
    }

    #[test]
    fn rejects_zero_n_max() {
        assert!(verify_identity(Identity::BCatalanSum, 0).is_err());
    }
}
