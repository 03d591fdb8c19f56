//! Machine checks of the total-class identities relating the Todd class to
//! alternating sums of Chern characters of exterior powers. Each check
//! returns the residual `LHS - RHS`; a nonzero residual is a result.

use super::chern::{ChernSeries, DegreeWindow};
use super::genera::{ch_exterior_all, todd, todd_prime};
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityConfig {
    /// Largest admissible number of roots.
    pub max_m: usize,
    /// Degrees checked beyond `m` for the untruncated identity.
    pub extra_degrees: usize,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            max_m: 8,
            extra_degrees: 2,
        }
    }
}

/// Residuals of
/// `Td * sum (-1)^r ch(R_r) = c_m`,
/// `{Td * sum (-1)^r r ch(R_r)}^{[<=m]} = -c_{m-1} + m/2 c_m` and
/// `{Td * sum (-1)^r r(r-1) ch(R_r)}^{[m]} = 1/6 c_1 c_{m-1} + m(3m-5)/12 c_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalClassResiduals {
    pub m: usize,
    pub alternating: ChernSeries,
    pub first_moment: ChernSeries,
    pub second_moment: ChernSeries,
}

impl TotalClassResiduals {
    pub fn all_zero(&self) -> bool {
        self.alternating.is_zero() && self.first_moment.is_zero() && self.second_moment.is_zero()
    }
}

/// Residuals of
/// `{Td' * sum (-1)^r ch(R_r)}^{[m]} = m/2 c_m` and
/// `{Td' * sum (-1)^r r ch(R_r)}^{[m]} = 1/12 c_1 c_{m-1} + m^2/4 c_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedToddResiduals {
    pub m: usize,
    pub alternating: ChernSeries,
    pub first_moment: ChernSeries,
}

impl DerivedToddResiduals {
    pub fn all_zero(&self) -> bool {
        self.alternating.is_zero() && self.first_moment.is_zero()
    }
}

fn check_range(m: usize, config: &IdentityConfig) -> Result<()> {
    if m == 0 || m > config.max_m {
        return Err(Error::Domain(format!(
            "number of roots {m} outside 1..={}",
            config.max_m
        )));
    }
    Ok(())
}

/// `sum_r (-1)^r weight(r) ch(R_r)`.
fn weighted_alternating_sum(chs: &[ChernSeries], weight: impl Fn(i64) -> i64) -> ChernSeries {
    let mut acc = ChernSeries::zero(chs[0].num_roots(), chs[0].order());
    for (r, ch) in chs.iter().enumerate() {
        let w = weight(r as i64);
        let sign = if r % 2 == 0 { 1 } else { -1 };
        if w != 0 {
            acc = acc.add(&ch.scale(&rational::int(sign * w)));
        }
    }
    acc
}

fn c(m: usize, order: usize, k: usize) -> ChernSeries {
    ChernSeries::chern_class(m, order, k)
}

pub fn verify_prop_total_class(m: usize) -> Result<TotalClassResiduals> {
    verify_prop_total_class_with(m, &IdentityConfig::default())
}

pub fn verify_prop_total_class_with(
    m: usize,
    config: &IdentityConfig,
) -> Result<TotalClassResiduals> {
    check_range(m, config)?;
    let order = m + config.extra_degrees;
    let td = todd(m, order)?;
    let chs = ch_exterior_all(m, order);
    let mi = m as i64;

    let alternating = td
        .mul(&weighted_alternating_sum(&chs, |_| 1))
        .sub(&c(m, order, m));

    let first_rhs = c(m, order, m - 1)
        .neg()
        .add(&c(m, order, m).scale(&rational::ratio(mi, 2)));
    let first_moment = td
        .mul(&weighted_alternating_sum(&chs, |r| r))
        .degree_part(DegreeWindow::AtMost(m))
        .sub(&first_rhs.degree_part(DegreeWindow::AtMost(m)));

    let second_rhs = c(m, order, 1)
        .mul(&c(m, order, m - 1))
        .scale(&rational::ratio(1, 6))
        .add(&c(m, order, m).scale(&rational::ratio(mi * (3 * mi - 5), 12)));
    let second_moment = td
        .mul(&weighted_alternating_sum(&chs, |r| r * (r - 1)))
        .degree_part(DegreeWindow::Exactly(m))
        .sub(&second_rhs.degree_part(DegreeWindow::Exactly(m)));

    Ok(TotalClassResiduals {
        m,
        alternating,
        first_moment,
        second_moment,
    })
}

pub fn verify_prop2_total_class(m: usize) -> Result<DerivedToddResiduals> {
    verify_prop2_total_class_with(m, &IdentityConfig::default())
}

pub fn verify_prop2_total_class_with(
    m: usize,
    config: &IdentityConfig,
) -> Result<DerivedToddResiduals> {
    check_range(m, config)?;
    let order = m + config.extra_degrees;
    let td_prime = todd_prime(m, order)?;
    let chs = ch_exterior_all(m, order);
    let mi = m as i64;

    let alternating = td_prime
        .mul(&weighted_alternating_sum(&chs, |_| 1))
        .degree_part(DegreeWindow::Exactly(m))
        .sub(&c(m, order, m).scale(&rational::ratio(mi, 2)));

    let rhs = c(m, order, 1)
        .mul(&c(m, order, m - 1))
        .scale(&rational::ratio(1, 12))
        .add(&c(m, order, m).scale(&rational::ratio(mi * mi, 4)));
    let first_moment = td_prime
        .mul(&weighted_alternating_sum(&chs, |r| r))
        .degree_part(DegreeWindow::Exactly(m))
        .sub(&rhs.degree_part(DegreeWindow::Exactly(m)));

    Ok(DerivedToddResiduals {
        m,
        alternating,
        first_moment,
    })
}

/// `{Td' / Td}^{[<=1]}` for `m` roots.
pub fn todd_log_derivative_low(m: usize) -> Result<ChernSeries> {
    let td = todd(m, 1)?;
    let ratio = todd_prime(m, 1)?.mul(&td.inverse()?);
    Ok(ratio.degree_part(DegreeWindow::AtMost(1)))
}

/// `m/2 - c_1/12`, the closed form of [`todd_log_derivative_low`].
pub fn todd_log_derivative_expected(m: usize) -> ChernSeries {
    ChernSeries::constant(m, 1, Rational::new((m as i64).into(), 2.into()))
        .sub(&c(m, 1, 1).scale(&rational::ratio(1, 12)))
}
