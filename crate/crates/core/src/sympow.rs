//! Polynomials in a symbolic integer exponent `r`, and the expansion of
//! `f(t)^r` whose `t^k` coefficient is such a polynomial.

use num::{bigint::Sign, BigInt, BigRational, BigUint, Integer, One, Zero};

/// A polynomial in the exponent variable `r` with exact rational
/// coefficients (`coeffs[j]` multiplies `r^j`).  The representation is
/// normalized: the leading coefficient is nonzero unless the polynomial is
/// zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPolynomial {
    coeffs: Vec<BigRational>,
}

impl ExponentPolynomial {
    pub fn zero() -> Self {
        ExponentPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ExponentPolynomial {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ExponentPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Multiplication by the monomial `r`.
    pub fn mul_by_r(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    pub fn eval_i64(&self, r: i64) -> BigRational {
        self.eval(&BigRational::from(BigInt::from(r)))
    }

    pub fn eval_big(&self, r: &BigInt) -> BigRational {
        self.eval(&BigRational::from(r.clone()))
    }

    /// Clears denominators: returns `(n, d)` with `d > 0` minimal such that
    /// `n(r) = d * self(r)` has integer coefficients.  The value `self(r)`
    /// is an integer exactly when `n(r) = 0 (mod d)`.
    pub fn cleared(&self) -> (Vec<BigInt>, BigUint) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let (sign, mag) = lcm.into_parts();
        debug_assert_eq!(sign, Sign::Plus);
        (ints, mag)
    }
}

/// The expansion `f(t)^r = sum_k P_k(r) t^k (mod t^{N+1})` for a series `f`
/// with constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPowerExpansion {
    polys: Vec<ExponentPolynomial>,
}

impl SymbolicPowerExpansion {
    pub(crate) fn new(polys: Vec<ExponentPolynomial>) -> Self {
        debug_assert_eq!(polys[0], ExponentPolynomial::one());
        debug_assert!(polys
            .iter()
            .enumerate()
            .all(|(k, p)| p.degree().unwrap_or(0) <= k));
        SymbolicPowerExpansion { polys }
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, k: usize) -> &ExponentPolynomial {
        &self.polys[k]
    }

    pub fn polys(&self) -> &[ExponentPolynomial] {
        &self.polys
    }

    /// Evaluates every coefficient polynomial at the integer exponent.
    pub fn eval_at(&self, r: i64) -> Vec<BigRational> {
        self.polys.iter().map(|p| p.eval_i64(r)).collect()
    }
}
