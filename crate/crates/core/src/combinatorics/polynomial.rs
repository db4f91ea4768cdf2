//! Dense univariate polynomials over exact coefficient rings.

use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense polynomial; `coeffs[i]` is the coefficient of `t^i`.
///
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case `coeffs` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntegerPolynomial = Polynomial<BigInt>;
pub type RationalPolynomial = Polynomial<BigRational>;

impl<T> Polynomial<T>
where
    T: Clone + Zero + One,
{
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![T::one()] }
    }

    /// The monic linear factor `t + c`.
    pub fn linear(c: T) -> Self {
        Self::from_coeffs(vec![c, T::one()])
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// In-place multiplication by `t + c`.
    pub fn mul_linear(&mut self, c: &T) {
        if self.coeffs.is_empty() {
            return;
        }
        let mut next = vec![T::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + a.clone();
            next[i] = next[i].clone() + a.clone() * c.clone();
        }
        self.coeffs = next;
        self.trim();
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl<T> Mul for &Polynomial<T>
where
    T: Clone + Zero + One,
{
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

/// Product of linear factors `(t + c_1)(t + c_2)...`; the empty product is 1.
pub fn product_of_linear<T, I>(shifts: I) -> Polynomial<T>
where
    T: Clone + Zero + One,
    I: IntoIterator<Item = T>,
{
    shifts.into_iter().fold(Polynomial::one(), |mut acc, c| {
        acc.mul_linear(&c);
        acc
    })
}
