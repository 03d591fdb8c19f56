use num_bigint::BigInt;

use crate::poly::UniPoly;
use crate::rational::Rational;
use crate::{Error, Result};

use super::{Component, SncPair, Stratum, MAX_COMPONENTS};

/// Id of the hyperplane at infinity.
pub const INFINITY_ID: &str = "inf";

/// `CP^r` with `s` coordinate hyperplanes and the hyperplane at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpPairModel {
    pub r: u32,
    pub s: u32,
    pub d: i64,
    pub mults: Vec<i64>,
    pub m_infinity: i64,
    /// `t^{r-s} prod_j (t - m_j/(m_j+d))` over the `s + 1` components.
    pub f_poly: UniPoly,
}

pub fn cp_pair(r: u32, s: u32, d: i64, mults: &[i64]) -> Result<(CpPairModel, SncPair)> {
    if r < 1 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    if s > r {
        return Err(Error::Domain(format!("need s <= r, got s = {s}, r = {r}")));
    }
    if d < 1 {
        return Err(Error::Domain(format!("d must be positive in the cp model, got {d}")));
    }
    if mults.len() != s as usize {
        return Err(Error::Domain(format!(
            "expected {s} multiplicities, got {}",
            mults.len()
        )));
    }
    if let Some(m) = mults.iter().find(|&&m| m < 1) {
        return Err(Error::Domain(format!(
            "multiplicities must be positive in the cp model, got {m}"
        )));
    }
    if s as usize + 1 > MAX_COMPONENTS {
        return Err(Error::Domain(format!("s = {s} exceeds the component limit")));
    }
    let overflow = || Error::Domain("m_infinity overflows 64 bits".into());
    let m_inf: i128 = -mults.iter().map(|&m| i128::from(m)).sum::<i128>()
        - i128::from(r) * i128::from(d)
        - i128::from(d);
    let m_infinity = i64::try_from(m_inf).map_err(|_| overflow())?;

    let mut all = mults.to_vec();
    all.push(m_infinity);
    let mut f = UniPoly::monomial((r - s) as usize);
    for &m in &all {
        let root = Rational::new(BigInt::from(m), BigInt::from(m) + BigInt::from(d));
        f = &f * &UniPoly::linear_factor(root);
    }

    let mut components: Vec<Component> = (1..=s)
        .map(|j| Component {
            id: j.to_string(),
            mult: mults[j as usize - 1],
            contains_center: false,
        })
        .collect();
    components.push(Component {
        id: INFINITY_ID.into(),
        mult: m_infinity,
        contains_center: false,
    });

    let l = s + 1;
    let entries = (0u32..1 << l)
        .filter(|j| j.count_ones() <= r)
        .map(|j| {
            (
                j,
                Stratum {
                    chi: i128::from(r + 1 - j.count_ones()),
                    chi_meet_center: None,
                },
            )
        })
        .collect();

    let model = CpPairModel {
        r,
        s,
        d,
        mults: mults.to_vec(),
        m_infinity,
        f_poly: f,
    };
    Ok((model, SncPair::from_parts_unchecked(d, components, entries, None)))
}

/// `f'(1)`.
pub fn chi_d_via_fprime(model: &CpPairModel) -> Rational {
    model.f_poly.derivative().eval(&Rational::from_integer(1.into()))
}
