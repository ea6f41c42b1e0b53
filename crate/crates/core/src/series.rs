//! Exact arithmetic on truncated formal power series over the rationals.
//!
//! A [`TruncatedSeries`] of order `N` holds the coefficients of `t^0..t^N`;
//! every operation is exact.  Binary operations require both operands to
//! have the same order (use [`TruncatedSeries::truncated`] to align them).

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::sympow::{ExponentPolynomial, SymbolicPowerExpansion};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("constant term must be 1, found {0}")]
    ConstantTermNotOne(BigRational),
    #[error("constant term must be 0, found {0}")]
    ConstantTermNotZero(BigRational),
}

/// A formal power series truncated at `t^order`, with exact rational
/// coefficients (`coeffs[k]` is the coefficient of `t^k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; `coeffs[k]` multiplies `t^k`.
    ///
    /// Panics if `coeffs` is empty (a series always has at least a constant
    /// term).
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        TruncatedSeries { coeffs }
    }

    /// Convenience constructor from integer numerator/denominator pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![BigRational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The same series truncated (or zero-extended) to the given order.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        coeffs.truncate(order + 1);
        Self::new(coeffs)
    }

    fn check_orders(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_orders(other)?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_orders(other)?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_orders(other)?;
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(Self::new(coeffs))
    }

    /// Multiplicative inverse: the unique `g` with `f * g = 1 mod t^{N+1}`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let order = self.order();
        let c0_inv = self.coeffs[0].recip();
        let mut g = vec![BigRational::zero(); order + 1];
        g[0] = c0_inv.clone();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &g[k - j];
                }
            }
            g[k] = -&c0_inv * acc;
        }
        Ok(Self::new(g))
    }

    /// Logarithm of a series with constant term 1, via the recurrence
    /// `g' f = f'` on coefficients.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne(self.coeffs[0].clone()));
        }
        let order = self.order();
        let mut g = vec![BigRational::zero(); order + 1];
        for k in 1..=order {
            // k g_k = k f_k - sum_{j=1}^{k-1} j g_j f_{k-j}
            let mut acc = BigRational::from(BigInt::from(k as i64)) * &self.coeffs[k];
            for (j, g_j) in g.iter().enumerate().take(k).skip(1) {
                if !g_j.is_zero() && !self.coeffs[k - j].is_zero() {
                    acc -= BigRational::from(BigInt::from(j as i64)) * g_j * &self.coeffs[k - j];
                }
            }
            g[k] = acc / BigRational::from(BigInt::from(k as i64));
        }
        Ok(Self::new(g))
    }

    /// Exponential of a series with constant term 0, via `g' = f' g`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ConstantTermNotZero(self.coeffs[0].clone()));
        }
        let order = self.order();
        let mut g = vec![BigRational::zero(); order + 1];
        g[0] = BigRational::one();
        for k in 1..=order {
            // k g_k = sum_{j=1}^{k} j f_j g_{k-j}
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !g[k - j].is_zero() {
                    acc += BigRational::from(BigInt::from(j as i64)) * &self.coeffs[j] * &g[k - j];
                }
            }
            g[k] = acc / BigRational::from(BigInt::from(k as i64));
        }
        Ok(Self::new(g))
    }

    /// `f^m` by repeated multiplication, at the series' own order.
    pub fn pow(&self, m: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..m {
            acc = acc.mul(self).expect("orders match by construction");
        }
        acc
    }

    /// The coefficients of `f(t)^r` as exact polynomials in the symbolic
    /// exponent `r`, computed as `exp(r log f)` over the polynomial ring.
    ///
    /// Requires constant term 1.  Evaluating the `k`-th polynomial at a
    /// nonnegative integer `m` reproduces coefficient `k` of [`Self::pow`].
    pub fn pow_symbolic(&self) -> Result<SymbolicPowerExpansion, SeriesError> {
        let log = self.log()?;
        let order = self.order();
        let mut polys = vec![ExponentPolynomial::zero(); order + 1];
        polys[0] = ExponentPolynomial::one();
        for k in 1..=order {
            // k P_k = sum_{j=1}^{k} j l_j r P_{k-j}
            let mut acc = ExponentPolynomial::zero();
            for j in 1..=k {
                let l_j = log.coeff(j);
                if !l_j.is_zero() {
                    let scale = BigRational::from(BigInt::from(j as i64)) * l_j;
                    acc = acc.add(&polys[k - j].scaled(&scale));
                }
            }
            let inv_k = BigRational::new(BigInt::one(), BigInt::from(k as i64));
            polys[k] = acc.mul_by_r().scaled(&inv_k);
        }
        Ok(SymbolicPowerExpansion::new(polys))
    }
}

/// The base series whose integer-coefficient powers obstruct complex and
/// quaternionic skew fibrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSeriesKind {
    /// `t / ln(1+t)`
    Complex,
    /// `(t / ln(1+t))^2`
    ComplexSquared,
    /// `((2/sqrt(t)) asinh(sqrt(t)/2))^2`
    Quaternionic,
}

/// Builds one of the obstruction base series to the given order.
///
/// The complex base is derived as the reciprocal of
/// `ln(1+t)/t = sum_k (-1)^k t^k/(k+1)`; the quaternionic base is the square
/// of the even series `sum_m (-1)^m (2m)!/(4^m (m!)^2 (2m+1)) (t/4)^m`, so no
/// fractional powers of `t` ever appear.
pub fn base_series(kind: BaseSeriesKind, order: usize) -> TruncatedSeries {
    match kind {
        BaseSeriesKind::Complex => {
            let log_over_t = TruncatedSeries::new(
                (0..=order)
                    .map(|k| {
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        BigRational::new(BigInt::from(sign), BigInt::from(k as i64 + 1))
                    })
                    .collect(),
            );
            log_over_t.inverse().expect("constant term is 1")
        }
        BaseSeriesKind::ComplexSquared => {
            let c = base_series(BaseSeriesKind::Complex, order);
            c.mul(&c).expect("orders match")
        }
        BaseSeriesKind::Quaternionic => {
            let mut coeffs = Vec::with_capacity(order + 1);
            // (2m)! / (4^m (m!)^2 (2m+1)) * (1/4)^m, alternating sign
            let mut fact_2m = BigInt::one();
            let mut fact_m = BigInt::one();
            for m in 0..=order {
                if m > 0 {
                    fact_2m *= BigInt::from(2 * m as i64 - 1) * BigInt::from(2 * m as i64);
                    fact_m *= BigInt::from(m as i64);
                }
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let num = BigInt::from(sign) * &fact_2m;
                let den = BigInt::from(16u32).pow(m as u32)
                    * &fact_m
                    * &fact_m
                    * BigInt::from(2 * m as i64 + 1);
                coeffs.push(BigRational::new(num, den));
            }
            let half = TruncatedSeries::new(coeffs);
            half.mul(&half).expect("orders match")
        }
    }
}
