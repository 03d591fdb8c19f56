use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::chern::{fmt_series, ChernSeries, Monomial};
use crate::poly::UniPoly;
use crate::rational::Rational;
use crate::{Error, Result};

/// A series in the roots `x_1..x_m`, truncated above total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSeries {
    num_roots: usize,
    order: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn degree(mono: &[u32]) -> usize {
    mono.iter().map(|&e| e as usize).sum()
}

impl RootSeries {
    pub fn zero(num_roots: usize, order: usize) -> Self {
        RootSeries {
            num_roots,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_roots: usize, order: usize) -> Self {
        let mut s = Self::zero(num_roots, order);
        s.add_term(vec![0; num_roots], Rational::one());
        s
    }

    /// The root `x_{j+1}` (zero-based `j`).
    pub fn root(num_roots: usize, order: usize, j: usize) -> Self {
        assert!(j < num_roots, "root index out of range");
        let mut s = Self::zero(num_roots, order);
        let mut mono = vec![0; num_roots];
        mono[j] = 1;
        s.add_term(mono, Rational::one());
        s
    }

    /// `f(x_{j+1})` for a univariate series `f`.
    pub fn from_univariate(num_roots: usize, order: usize, j: usize, f: &UniPoly) -> Self {
        assert!(j < num_roots, "root index out of range");
        let mut s = Self::zero(num_roots, order);
        for (i, c) in f.coeffs().iter().enumerate() {
            let mut mono = vec![0; num_roots];
            mono[j] = i as u32;
            s.add_term(mono, c.clone());
        }
        s
    }

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

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() || degree(&mono) > self.order {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &[u32]) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_roots, other.num_roots);
        let mut out = self.truncate(self.order.min(other.order));
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.num_roots, self.order);
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_roots, other.num_roots);
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.num_roots, order);
        for (ma, a) in &self.terms {
            let da = degree(ma);
            for (mb, b) in &other.terms {
                if da + degree(mb) > order {
                    continue;
                }
                out.add_term(ma.iter().zip(mb).map(|(x, y)| x + y).collect(), a * b);
            }
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        RootSeries {
            num_roots: self.num_roots,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-indexes into `total` roots, placing these roots at
    /// `offset..offset + m`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        assert!(offset + self.num_roots <= total);
        let mut out = Self::zero(total, self.order);
        for (mono, c) in &self.terms {
            let mut wide = vec![0; total];
            wide[offset..offset + self.num_roots].copy_from_slice(mono);
            out.add_term(wide, c.clone());
        }
        out
    }

    /// First adjacent transposition `(i, i+1)` (one-based) that changes the
    /// series, with the offending monomial.
    fn symmetry_violation(&self) -> Option<(usize, Monomial)> {
        for (mono, c) in &self.terms {
            for i in 0..self.num_roots.saturating_sub(1) {
                let mut swapped = mono.clone();
                swapped.swap(i, i + 1);
                if &self.coefficient(&swapped) != c {
                    return Some((i + 1, mono.clone()));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }
}

impl fmt::Display for RootSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_series(f, self.terms.iter(), "x")
    }
}

/// `e_k(x_1..x_m)` truncated at `order`.
pub fn elementary_symmetric(num_roots: usize, k: usize, order: usize) -> Result<RootSeries> {
    if k > num_roots {
        return Err(Error::Domain(format!(
            "e_{k} is undefined for {num_roots} roots (need 0 <= k <= m)"
        )));
    }
    Ok(elementary_all(num_roots, order).swap_remove(k))
}

/// `[e_0, .., e_m]` via `E_k <- E_k + x_j E_{k-1}` over the roots.
fn elementary_all(num_roots: usize, order: usize) -> Vec<RootSeries> {
    let mut e = vec![RootSeries::zero(num_roots, order); num_roots + 1];
    e[0] = RootSeries::one(num_roots, order);
    for j in 0..num_roots {
        let x = RootSeries::root(num_roots, order, j);
        for k in (1..=j + 1).rev() {
            e[k] = e[k].add(&x.mul(&e[k - 1]));
        }
    }
    e
}

impl ChernSeries {
    /// Substitutes `c_k = e_k(x_1..x_m)`.
    pub fn to_roots(&self) -> RootSeries {
        let m = self.num_roots();
        let e = elementary_all(m, self.order());
        let mut out = RootSeries::zero(m, self.order());
        for (mono, c) in self.terms() {
            let mut term = RootSeries::one(m, self.order());
            for (k, &exp) in mono.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&e[k + 1]);
                }
            }
            out = out.add(&term.scale(c));
        }
        out
    }
}

/// Rewrites a symmetric root series in the Chern basis by repeatedly
/// cancelling the lexicographically leading monomial `x^lambda` against
/// `prod_k e_k^{lambda_k - lambda_{k+1}}`.
pub fn symmetrize_to_chern(s: &RootSeries) -> Result<ChernSeries> {
    if let Some((i, mono)) = s.symmetry_violation() {
        let mut tmp = RootSeries::zero(s.num_roots, s.order);
        tmp.add_term(mono, Rational::one());
        return Err(Error::SymmetryViolation {
            i,
            j: i + 1,
            monomial: tmp.to_string(),
        });
    }
    let m = s.num_roots;
    let e = elementary_all(m, s.order);
    let mut rest = s.clone();
    let mut out = ChernSeries::zero(m, s.order);
    while let Some((lead, c)) = rest.terms.last_key_value() {
        let (lead, c) = (lead.clone(), c.clone());
        let chern: Monomial = (0..m)
            .map(|k| lead[k] - lead.get(k + 1).copied().unwrap_or(0))
            .collect();
        let mut expansion = RootSeries::one(m, s.order);
        for (k, &exp) in chern.iter().enumerate() {
            for _ in 0..exp {
                expansion = expansion.mul(&e[k + 1]);
            }
        }
        rest = rest.sub(&expansion.scale(&c));
        out.add_term(chern, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn elementary_small_cases() {
        let e1 = elementary_symmetric(2, 1, 3).unwrap();
        let expected =
            RootSeries::from_terms(2, 3, [(vec![1, 0], int(1)), (vec![0, 1], int(1))]).unwrap();
        assert_eq!(e1, expected);
        let e2 = elementary_symmetric(2, 2, 3).unwrap();
        assert_eq!(
            e2,
            RootSeries::from_terms(2, 3, [(vec![1, 1], int(1))]).unwrap()
        );
        assert_eq!(elementary_symmetric(3, 0, 2).unwrap(), RootSeries::one(3, 2));
        assert!(elementary_symmetric(2, 3, 4).is_err());
        // e_2 beyond the truncation order vanishes
        assert!(elementary_symmetric(3, 2, 1).unwrap().is_zero());
    }

    #[test]
    fn symmetrize_power_sum() {
        // x1^2 + x2^2 = c1^2 - 2 c2 (Newton)
        let p2 =
            RootSeries::from_terms(2, 2, [(vec![2, 0], int(1)), (vec![0, 2], int(1))]).unwrap();
        let c = symmetrize_to_chern(&p2).unwrap();
        let expected =
            ChernSeries::from_terms(2, 2, [(vec![2, 0], int(1)), (vec![0, 1], int(-2))]).unwrap();
        assert_eq!(c, expected);
        // and the expansion check: c1^2 - 2c2 back in roots
        assert_eq!(expected.to_roots(), p2);
    }

    #[test]
    fn symmetrize_first_elementary() {
        let e1 = elementary_symmetric(2, 1, 2).unwrap();
        assert_eq!(
            symmetrize_to_chern(&e1).unwrap(),
            ChernSeries::chern_class(2, 2, 1)
        );
    }

    #[test]
    fn non_symmetric_input_names_transposition() {
        let x1 = RootSeries::root(2, 2, 0);
        match symmetrize_to_chern(&x1) {
            Err(Error::SymmetryViolation { i, j, monomial }) => {
                assert_eq!((i, j), (1, 2));
                assert_eq!(monomial, "x1");
            }
            other => panic!("expected symmetry violation, got {other:?}"),
        }
    }

    #[test]
    fn embedding_places_roots() {
        let x = RootSeries::root(1, 2, 0);
        let wide = x.embed(3, 2);
        assert_eq!(wide, RootSeries::root(3, 2, 2));
    }
}
