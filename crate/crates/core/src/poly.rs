//! Dense univariate polynomials over the rationals, doubling as truncated
//! power series when paired with an explicit order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// `coeffs[i]` is the coefficient of `t^i`. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        UniPoly { coeffs }
    }

    /// `t - root`.
    pub fn linear_factor(root: Rational) -> Self {
        UniPoly::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::int(i as i64))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Drops every term of degree > `order`.
    pub fn truncate(&self, order: usize) -> Self {
        UniPoly::new(self.coeffs.iter().take(order + 1).cloned().collect())
    }

    /// Product keeping degrees `<= order`.
    pub fn mul_trunc(&self, other: &Self, order: usize) -> Self {
        let len = (order + 1).min(self.coeffs.len() + other.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Multiplicative inverse as a power series to `order`; `None` when the
    /// constant term vanishes.
    pub fn inverse_series(&self, order: usize) -> Option<Self> {
        let a0 = self.coeffs.first().filter(|c| !c.is_zero())?;
        let inv0 = a0.recip();
        let mut out = vec![inv0.clone()];
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(-acc * &inv0);
        }
        Some(UniPoly::new(out))
    }

    /// `log(self)` as a power series to `order`; requires constant term 1.
    pub fn log_series(&self, order: usize) -> Option<Self> {
        if self.coeff(0) != Rational::one() {
            return None;
        }
        let quotient = self
            .derivative()
            .mul_trunc(&self.inverse_series(order)?, order);
        // integrate term by term
        let mut out = vec![Rational::zero()];
        for i in 0..order {
            out.push(quotient.coeff(i) / rational::int(i as i64 + 1));
        }
        Some(UniPoly::new(out))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        match (self.degree(), rhs.degree()) {
            (Some(a), Some(b)) => self.mul_trunc(rhs, a + b),
            _ => UniPoly::zero(),
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn derivative_and_eval() {
        // (t - 1/2)(t - 3/2) = t^2 - 2t + 3/4
        let f = &UniPoly::linear_factor(ratio(1, 2)) * &UniPoly::linear_factor(ratio(3, 2));
        assert_eq!(f.coeffs(), &[ratio(3, 4), int(-2), int(1)]);
        assert_eq!(f.derivative().eval(&int(1)), int(0));
        assert_eq!(f.eval(&int(2)), ratio(3, 4));
    }

    #[test]
    fn geometric_series_inverse() {
        let one_minus_t = UniPoly::new(vec![int(1), int(-1)]);
        let inv = one_minus_t.inverse_series(5).unwrap();
        assert_eq!(inv.coeffs(), vec![int(1); 6].as_slice());
        assert!(UniPoly::monomial(1).inverse_series(3).is_none());
    }

    #[test]
    fn log_of_one_plus_t() {
        let f = UniPoly::new(vec![int(1), int(1)]);
        let log = f.log_series(4).unwrap();
        assert_eq!(
            log.coeffs(),
            &[int(0), int(1), ratio(-1, 2), ratio(1, 3), ratio(-1, 4)]
        );
    }
}
