use std::collections::BTreeMap;

use crate::rational::Rational;
use crate::{Error, Result};

use super::{chi_d, compress, Center, Component, SncPair, Stratum, Subset};

/// Result of blowing up the center of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUp {
    pub m0: i64,
    /// Index of `E` among the new components, `None` when `m0 = 0`.
    pub exceptional_index: Option<usize>,
    pub pair: SncPair,
}

/// The pairs `(Y, D_Y)` and `(E, D_E)` induced by the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterPairs {
    pub center: SncPair,
    pub exceptional: SncPair,
    pub chi_d_center: Rational,
    pub chi_d_exceptional: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupReport {
    pub m0: i64,
    pub before: Rational,
    pub after: Rational,
    pub equal: bool,
    pub chi_d_center: Rational,
    pub chi_d_exceptional: Rational,
}

fn require_center(pair: &SncPair) -> Result<Center> {
    let center = pair.center().ok_or_else(|| {
        Error::Precondition("blow-up operations need center metadata (\"center\": {\"codim\": r})".into())
    })?;
    if pair.d() <= 0 {
        return Err(Error::Precondition(format!(
            "blow-up operations need d > 0, got d = {}",
            pair.d()
        )));
    }
    Ok(center)
}

/// `m_0 = m_1 + ... + m_s + r d - d` over the components containing the center.
pub fn exceptional_multiplicity(pair: &SncPair) -> Result<i64> {
    let center = require_center(pair)?;
    let sum: i128 = pair
        .components()
        .iter()
        .filter(|c| c.contains_center)
        .map(|c| i128::from(c.mult))
        .sum();
    let m0 = sum + (i128::from(center.codim) - 1) * i128::from(pair.d());
    i64::try_from(m0).map_err(|_| Error::Domain(format!("m_0 = {m0} overflows 64 bits")))
}

/// Strata `E cap D'_K` as `(K, chi)`: rule `chi(Y cap D_{K \ C}) * (r - |K cap C|)`,
/// empty when the fiber dimension drops below zero.
fn exceptional_strata(pair: &SncPair, center: Center) -> Vec<(Subset, i128)> {
    let contains = pair.contains_mask();
    let r = i128::from(center.codim);
    let mut out = Vec::new();
    for (outside, stratum) in pair.strata().entries() {
        if outside & contains != 0 {
            continue;
        }
        let Some(y) = stratum.chi_meet_center else {
            continue;
        };
        // Enumerate all submasks of `contains`.
        let mut b = contains;
        loop {
            let fiber = r - i128::from(b.count_ones());
            if fiber > 0 {
                out.push((outside | b, y * fiber));
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & contains;
        }
    }
    out
}

fn exceptional_id(pair: &SncPair) -> String {
    let mut id = String::from("E");
    while pair.component_index(&id).is_some() {
        id.push('\'');
    }
    id
}

pub fn blowup_transform(pair: &SncPair) -> Result<BlowUp> {
    let center = require_center(pair)?;
    let m0 = exceptional_multiplicity(pair)?;
    let contains = pair.contains_mask();
    let r = i128::from(center.codim);

    let mut entries = BTreeMap::new();
    for (subset, stratum) in pair.strata().entries() {
        let c = r - i128::from((subset & contains).count_ones());
        let meet = stratum.chi_meet_center;
        let chi = stratum.chi + meet.unwrap_or(0) * (c - 1);
        // The strict transforms separate once the center swallows the stratum.
        if c == 0 && meet.is_some() && chi == 0 {
            continue;
        }
        entries.insert(
            subset,
            Stratum {
                chi,
                chi_meet_center: None,
            },
        );
    }

    let mut components: Vec<Component> = pair
        .components()
        .iter()
        .map(|c| Component {
            contains_center: false,
            ..c.clone()
        })
        .collect();
    let exceptional_index = if m0 == 0 {
        None
    } else {
        let e = components.len();
        if e >= super::MAX_COMPONENTS {
            return Err(Error::Domain(format!(
                "blow-up would exceed {} components",
                super::MAX_COMPONENTS
            )));
        }
        if i128::from(m0) == -i128::from(pair.d()) {
            return Err(Error::ForbiddenMultiplicity {
                component: exceptional_id(pair),
                mult: m0,
            });
        }
        components.push(Component {
            id: exceptional_id(pair),
            mult: m0,
            contains_center: false,
        });
        for (k, chi) in exceptional_strata(pair, center) {
            entries.insert(
                k | (1 << e),
                Stratum {
                    chi,
                    chi_meet_center: None,
                },
            );
        }
        Some(e)
    };

    Ok(BlowUp {
        m0,
        exceptional_index,
        pair: SncPair::from_parts_unchecked(pair.d(), components, entries, None),
    })
}

fn restrict(pair: &SncPair, kept: &[usize], entries: Vec<(Subset, i128)>) -> SncPair {
    let components = kept
        .iter()
        .map(|&i| Component {
            contains_center: false,
            ..pair.components()[i].clone()
        })
        .collect();
    let entries = entries
        .into_iter()
        .map(|(k, chi)| {
            (
                compress(k, kept),
                Stratum {
                    chi,
                    chi_meet_center: None,
                },
            )
        })
        .collect();
    SncPair::from_parts_unchecked(pair.d(), components, entries, None)
}

pub fn induced_center_pairs(pair: &SncPair) -> Result<CenterPairs> {
    let center = require_center(pair)?;
    let contains = pair.contains_mask();
    let table = pair.strata();

    let y_entries: Vec<(Subset, i128)> = table
        .entries()
        .filter(|(k, _)| k & contains == 0)
        .filter_map(|(k, s)| s.chi_meet_center.map(|y| (k, y)))
        .collect();
    let y_kept: Vec<usize> = (0..pair.components().len())
        .filter(|&j| y_entries.iter().any(|(k, _)| *k == 1 << j))
        .collect();
    let center_pair = restrict(pair, &y_kept, y_entries);

    let e_entries = exceptional_strata(pair, center);
    let e_kept: Vec<usize> = (0..pair.components().len())
        .filter(|&j| e_entries.iter().any(|(k, _)| *k == 1 << j))
        .collect();
    let exceptional = restrict(pair, &e_kept, e_entries);

    Ok(CenterPairs {
        chi_d_center: chi_d(&center_pair)?,
        chi_d_exceptional: chi_d(&exceptional)?,
        center: center_pair,
        exceptional,
    })
}

pub fn check_blowup_invariance(pair: &SncPair) -> Result<BlowupReport> {
    let blown = blowup_transform(pair)?;
    let induced = induced_center_pairs(pair)?;
    let before = chi_d(pair)?;
    let after = chi_d(&blown.pair)?;
    Ok(BlowupReport {
        m0: blown.m0,
        equal: before == after,
        before,
        after,
        chi_d_center: induced.chi_d_center,
        chi_d_exceptional: induced.chi_d_exceptional,
    })
}

