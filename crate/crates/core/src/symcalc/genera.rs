use num_traits::Zero;

use super::chern::{ChernSeries, DegreeWindow};
use crate::poly::UniPoly;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// `x / (1 - e^{-x})` to degree `order`, by dividing `1 - e^{-x}` by `x` and
/// inverting the quotient.
pub fn todd_generator(order: usize) -> UniPoly {
    let quotient = UniPoly::new(
        (0..=order)
            .map(|n| {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                rational::int(sign) / rational::factorial(n as u32 + 1)
            })
            .collect(),
    );
    quotient
        .inverse_series(order)
        .expect("(1 - e^{-x})/x has constant term 1")
}

/// Power sums `p_0 = m, p_1, .., p_order` in the Chern basis.
pub fn power_sums(num_roots: usize, order: usize) -> Vec<ChernSeries> {
    let c = |k: usize| ChernSeries::chern_class(num_roots, order, k);
    let mut p = vec![ChernSeries::constant(
        num_roots,
        order,
        rational::int(num_roots as i64),
    )];
    for k in 1..=order {
        let sign = |i: usize| if i % 2 == 1 { 1 } else { -1 };
        let mut acc = c(k).scale(&rational::int(sign(k) * k as i64));
        for i in 1..k {
            acc = acc.add(&c(i).mul(&p[k - i]).scale(&rational::int(sign(i))));
        }
        p.push(acc);
    }
    p
}

/// The Todd class `prod_j x_j / (1 - e^{-x_j})` of `m` roots, to weighted
/// degree `order`, computed as `exp(sum_k a_k p_k)` where `a_k` are the
/// coefficients of `log(x / (1 - e^{-x}))`.
pub fn todd(num_roots: usize, order: usize) -> Result<ChernSeries> {
    if num_roots == 0 {
        return Err(Error::Domain("Todd class needs at least one root".into()));
    }
    let log = todd_generator(order)
        .log_series(order)
        .expect("generator has constant term 1");
    let p = power_sums(num_roots, order);
    let mut exponent = ChernSeries::zero(num_roots, order);
    for (k, pk) in p.iter().enumerate().skip(1) {
        let a = log.coeff(k);
        if !a.is_zero() {
            exponent = exponent.add(&pk.scale(&a));
        }
    }
    exponent.exp()
}

#[derive(Clone)]
struct Dual {
    value: ChernSeries,
    eps: ChernSeries,
}

impl Dual {
    fn mul(&self, other: &Dual) -> Dual {
        Dual {
            value: self.value.mul(&other.value),
            eps: self.value.mul(&other.eps).add(&self.eps.mul(&other.value)),
        }
    }
}

/// `d/dt F(x_1 + t, .., x_m + t) |_{t=0}`.
///
/// Works over the nilpotent extension `t^2 = 0`: shifting every root by `t`
/// sends `c_k` to `c_k + t (m - k + 1) c_{k-1}`, and the `t` coefficient of
/// the substituted series is the derivative. The result is truncated one
/// degree below the input, since that is where it is exact.
pub fn shift_derivative(series: &ChernSeries) -> ChernSeries {
    let m = series.num_roots();
    let order = series.order();
    let shifted: Vec<Dual> = (1..=m)
        .map(|k| Dual {
            value: ChernSeries::chern_class(m, order, k),
            eps: ChernSeries::chern_class(m, order, k - 1)
                .scale(&rational::int((m - k + 1) as i64)),
        })
        .collect();
    let mut out = ChernSeries::zero(m, order);
    for (mono, c) in series.terms() {
        let mut acc = Dual {
            value: ChernSeries::one(m, order),
            eps: ChernSeries::zero(m, order),
        };
        for (k, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(&shifted[k]);
            }
        }
        out = out.add(&acc.eps.scale(c));
    }
    out.truncate(order.saturating_sub(1))
}

/// `Td'`: the derivative of the Todd class under a uniform shift of the
/// roots, to weighted degree `order`.
pub fn todd_prime(num_roots: usize, order: usize) -> Result<ChernSeries> {
    Ok(shift_derivative(&todd(num_roots, order + 1)?))
}

/// `[ch(R_0), .., ch(R_m)]` where `ch(R_r) = e_r(e^{-x_1}, .., e^{-x_m})`.
///
/// Uses the power sums `P_i = sum_j e^{-i x_j} = sum_n (-i)^n p_n / n!` and
/// Newton's recursion `r e_r = sum_{i=1}^r (-1)^{i-1} e_{r-i} P_i`.
pub fn ch_exterior_all(num_roots: usize, order: usize) -> Vec<ChernSeries> {
    let p = power_sums(num_roots, order);
    let shifted_sums: Vec<ChernSeries> = (1..=num_roots)
        .map(|i| {
            let mut acc = ChernSeries::zero(num_roots, order);
            let mut scale = Rational::from_integer(1.into());
            for (n, pn) in p.iter().enumerate() {
                if n > 0 {
                    scale = scale * rational::int(-(i as i64)) / rational::int(n as i64);
                }
                acc = acc.add(&pn.scale(&scale));
            }
            acc
        })
        .collect();
    let mut e = vec![ChernSeries::one(num_roots, order)];
    for r in 1..=num_roots {
        let mut acc = ChernSeries::zero(num_roots, order);
        for i in 1..=r {
            let term = e[r - i].mul(&shifted_sums[i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        e.push(acc.scale(&rational::ratio(1, r as i64)));
    }
    e
}

/// `ch(R_r)`, the Chern character of the `r`-th exterior power of the dual.
pub fn ch_exterior(num_roots: usize, r: usize, order: usize) -> Result<ChernSeries> {
    if r > num_roots {
        return Err(Error::Domain(format!(
            "exterior power {r} out of range for rank {num_roots}"
        )));
    }
    Ok(ch_exterior_all(num_roots, order).swap_remove(r))
}

pub fn degree_part(series: &ChernSeries, window: DegreeWindow) -> ChernSeries {
    series.degree_part(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn series(m: usize, n: usize, terms: &[(&[u32], Rational)]) -> ChernSeries {
        ChernSeries::from_terms(m, n, terms.iter().map(|(k, v)| (k.to_vec(), v.clone()))).unwrap()
    }

    #[test]
    fn generator_coefficients() {
        // x/(1-e^{-x}) = 1 + x/2 + x^2/12 - x^4/720 + ...
        let g = todd_generator(4);
        assert_eq!(
            g.coeffs(),
            &[int(1), ratio(1, 2), ratio(1, 12), int(0), ratio(-1, 720)]
        );
    }

    #[test]
    fn todd_low_degrees() {
        let td = todd(2, 2).unwrap();
        let expected = series(
            2,
            2,
            &[
                (&[0, 0], int(1)),
                (&[1, 0], ratio(1, 2)),
                (&[2, 0], ratio(1, 12)),
                (&[0, 1], ratio(1, 12)),
            ],
        );
        assert_eq!(td, expected);
        let td1 = todd(1, 2).unwrap();
        assert_eq!(
            td1,
            series(1, 2, &[(&[0], int(1)), (&[1], ratio(1, 2)), (&[2], ratio(1, 12))])
        );
        assert_eq!(todd(1, 0).unwrap(), ChernSeries::one(1, 0));
        assert!(todd(0, 3).is_err());
    }

    #[test]
    fn todd_degree_three_and_four() {
        // classical: Td_3 = c1 c2 / 24, Td_4 = (-c1^4 + 4c1^2c2 + 3c2^2 + c1c3 - c4)/720
        let td = todd(4, 4).unwrap();
        assert_eq!(td.coefficient(&[1, 1, 0, 0]), ratio(1, 24));
        assert_eq!(td.coefficient(&[3, 0, 0, 0]), int(0));
        assert_eq!(td.coefficient(&[4, 0, 0, 0]), ratio(-1, 720));
        assert_eq!(td.coefficient(&[2, 1, 0, 0]), ratio(4, 720));
        assert_eq!(td.coefficient(&[0, 2, 0, 0]), ratio(3, 720));
        assert_eq!(td.coefficient(&[1, 0, 1, 0]), ratio(1, 720));
        assert_eq!(td.coefficient(&[0, 0, 0, 1]), ratio(-1, 720));
    }

    #[test]
    fn shift_derivative_of_chern_classes() {
        for m in 1..=5 {
            let c1 = ChernSeries::chern_class(m, 3, 1);
            assert_eq!(
                shift_derivative(&c1),
                ChernSeries::constant(m, 2, int(m as i64))
            );
            if m >= 2 {
                let c2 = ChernSeries::chern_class(m, 3, 2);
                assert_eq!(
                    shift_derivative(&c2),
                    ChernSeries::chern_class(m, 2, 1).scale(&int(m as i64 - 1))
                );
            }
        }
    }

    #[test]
    fn single_root_chern_character() {
        let ch = ch_exterior(1, 1, 2).unwrap();
        assert_eq!(
            ch,
            series(1, 2, &[(&[0], int(1)), (&[1], int(-1)), (&[2], ratio(1, 2))])
        );
        assert_eq!(ch_exterior(2, 0, 3).unwrap(), ChernSeries::one(2, 3));
        assert!(ch_exterior(2, 3, 3).is_err());
    }

    #[test]
    fn alternating_sum_starts_in_degree_m() {
        for m in 1..=5 {
            let all = ch_exterior_all(m, m + 1);
            let mut alt = ChernSeries::zero(m, m + 1);
            for (r, ch) in all.iter().enumerate() {
                alt = if r % 2 == 0 { alt.add(ch) } else { alt.sub(ch) };
            }
            assert!(alt.degree_part(DegreeWindow::AtMost(m - 1)).is_zero());
            // lowest term is prod x_j = c_m
            assert_eq!(
                alt.degree_part(DegreeWindow::Exactly(m)),
                ChernSeries::chern_class(m, m + 1, m)
            );
        }
    }

    #[test]
    fn rank_of_exterior_powers() {
        // constant term of ch(R_r) is C(m, r)
        let all = ch_exterior_all(5, 2);
        for (r, ch) in all.iter().enumerate() {
            assert_eq!(
                ch.constant_term(),
                Rational::from_integer(rational::binomial(5, r as u64))
            );
        }
    }
}
