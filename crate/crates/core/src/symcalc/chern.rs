use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Exponent vector; entry `k` is the exponent of `c_{k+1}` (or of `x_{k+1}`
/// in the root basis).
pub type Monomial = Vec<u32>;

/// Which graded pieces [`ChernSeries::degree_part`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeWindow {
    /// `{F}^{[p]}`
    Exactly(usize),
    /// `{F}^{[<=p]}`
    AtMost(usize),
}

impl DegreeWindow {
    fn contains(self, degree: usize) -> bool {
        match self {
            DegreeWindow::Exactly(p) => degree == p,
            DegreeWindow::AtMost(p) => degree <= p,
        }
    }
}

/// A symmetric series in `m` roots written in the Chern-class basis and
/// truncated above weighted degree `order`. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernSeries {
    num_roots: usize,
    order: usize,
    terms: BTreeMap<Monomial, Rational>,
}

pub(crate) fn weighted_degree(mono: &[u32]) -> usize {
    mono.iter()
        .enumerate()
        .map(|(k, &e)| (k + 1) * e as usize)
        .sum()
}

impl ChernSeries {
    pub fn zero(num_roots: usize, order: usize) -> Self {
        ChernSeries {
            num_roots,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_roots: usize, order: usize, c: Rational) -> Self {
        let mut s = Self::zero(num_roots, order);
        s.add_term(vec![0; num_roots], c);
        s
    }

    pub fn one(num_roots: usize, order: usize) -> Self {
        Self::constant(num_roots, order, Rational::one())
    }

    /// `c_k`, with `c_0 = 1` and `c_k = 0` for `k > m`.
    pub fn chern_class(num_roots: usize, order: usize, k: usize) -> Self {
        if k == 0 {
            return Self::one(num_roots, order);
        }
        let mut s = Self::zero(num_roots, order);
        if k <= num_roots {
            let mut mono = vec![0; num_roots];
            mono[k - 1] = 1;
            s.add_term(mono, Rational::one());
        }
        s
    }

    /// Builds a series from explicit terms. Terms above `order` are dropped.
    pub fn from_terms<I>(num_roots: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Self::zero(num_roots, order);
        for (mono, c) in terms {
            if mono.len() != num_roots {
                return Err(Error::Domain(format!(
                    "monomial {mono:?} has {} exponents, expected {num_roots}",
                    mono.len()
                )));
            }
            s.add_term(mono, c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() || weighted_degree(&mono) > self.order {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn num_roots(&self) -> usize {
        self.num_roots
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &[u32]) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.num_roots])
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.num_roots, other.num_roots,
            "series over different numbers of roots"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.truncate(self.order.min(other.order));
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.num_roots, self.order);
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), v * c);
        }
        out
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.num_roots, order);
        for (ma, a) in &self.terms {
            let da = weighted_degree(ma);
            if da > order {
                continue;
            }
            for (mb, b) in &other.terms {
                if da + weighted_degree(mb) > order {
                    continue;
                }
                let mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(mono, a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.num_roots, self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops every term of weighted degree above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        ChernSeries {
            num_roots: self.num_roots,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| weighted_degree(m) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the graded pieces selected by `window`; the truncation order is
    /// unchanged.
    pub fn degree_part(&self, window: DegreeWindow) -> Self {
        ChernSeries {
            num_roots: self.num_roots,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| window.contains(weighted_degree(m)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain(
                "exp of a series with nonzero constant term".into(),
            ));
        }
        let mut acc = Self::one(self.num_roots, self.order);
        let mut power = Self::one(self.num_roots, self.order);
        for n in 1..=self.order as u32 {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&rational::factorial(n).recip()));
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::Domain(
                "inverse of a series with zero constant term".into(),
            ));
        }
        // self = c0 (1 - u)  =>  1/self = c0^{-1} (1 + u + u^2 + ...)
        let inv0 = c0.recip();
        let u = Self::one(self.num_roots, self.order).sub(&self.scale(&inv0));
        let mut acc = Self::one(self.num_roots, self.order);
        let mut power = Self::one(self.num_roots, self.order);
        for _ in 0..self.order {
            power = power.mul(&u);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }
}

fn fmt_monomial(mono: &[u32], prefix: &str) -> String {
    let parts: Vec<String> = mono
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| {
            if e == 1 {
                format!("{prefix}{}", k + 1)
            } else {
                format!("{prefix}{}^{e}", k + 1)
            }
        })
        .collect();
    parts.join("*")
}

pub(crate) fn fmt_series<'a, I>(f: &mut fmt::Formatter<'_>, terms: I, prefix: &str) -> fmt::Result
where
    I: Iterator<Item = (&'a Monomial, &'a Rational)>,
{
    // lowest degree first, then reverse-lex within a degree so that c1^2
    // prints before c2
    let mut terms: Vec<_> = terms.collect();
    if terms.is_empty() {
        return write!(f, "0");
    }
    terms.sort_by(|(a, _), (b, _)| {
        let da: u32 = if prefix == "c" {
            weighted_degree(a) as u32
        } else {
            a.iter().sum()
        };
        let db: u32 = if prefix == "c" {
            weighted_degree(b) as u32
        } else {
            b.iter().sum()
        };
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    for (i, (mono, c)) in terms.into_iter().enumerate() {
        let body = fmt_monomial(mono, prefix);
        let (sign, mag) = if c < &Rational::zero() {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        if i == 0 {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        match (body.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{mag}")?,
            (false, true) => write!(f, "{body}")?,
            (false, false) => write!(f, "{mag}*{body}")?,
        }
    }
    Ok(())
}

impl fmt::Display for ChernSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_series(f, self.terms.iter(), "c")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn truncation_drops_high_degree() {
        let c2 = ChernSeries::chern_class(3, 2, 2);
        let c1 = ChernSeries::chern_class(3, 2, 1);
        assert!(c2.mul(&c1).is_zero());
        assert!(ChernSeries::chern_class(2, 4, 3).is_zero());
        assert_eq!(c1.pow(2).len(), 1);
    }

    #[test]
    fn cancellation_prunes_zeros() {
        let c1 = ChernSeries::chern_class(2, 3, 1);
        assert!(c1.sub(&c1).is_zero());
        assert_eq!(c1.sub(&c1).len(), 0);
    }

    #[test]
    fn degree_part_of_affine_class_is_empty_above() {
        let s = ChernSeries::one(2, 3).add(&ChernSeries::chern_class(2, 3, 1));
        assert!(s.degree_part(DegreeWindow::Exactly(2)).is_zero());
        assert_eq!(s.degree_part(DegreeWindow::AtMost(0)), ChernSeries::one(2, 3));
    }

    #[test]
    fn exp_and_inverse_agree() {
        let c1 = ChernSeries::chern_class(2, 4, 1);
        let e = c1.exp().unwrap();
        let e_neg = c1.neg().exp().unwrap();
        assert_eq!(e.inverse().unwrap(), e_neg);
        assert_eq!(e.coefficient(&[2, 0]), ratio(1, 2));
        assert_eq!(e.coefficient(&[4, 0]), ratio(1, 24));
        assert!(ChernSeries::one(1, 2).exp().is_err());
        assert!(c1.inverse().is_err());
        assert_eq!(ChernSeries::constant(1, 0, int(4)).inverse().unwrap().constant_term(), ratio(1, 4));
    }

    #[test]
    fn display_orders_by_degree() {
        let s = ChernSeries::from_terms(
            2,
            2,
            [
                (vec![0, 1], ratio(1, 12)),
                (vec![2, 0], ratio(1, 12)),
                (vec![1, 0], ratio(1, 2)),
                (vec![0, 0], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(s.to_string(), "1 + 1/2*c1 + 1/12*c1^2 + 1/12*c2");
        assert_eq!(ChernSeries::zero(2, 2).to_string(), "0");
    }
}
