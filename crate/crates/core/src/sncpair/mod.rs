//! Combinatorial skeleton of a `d`-Calabi-Yau pair `(X, D = sum m_j D_j)`.
//!
//! A pair is a degree `d`, a list of divisor components with multiplicities
//! and a table of Euler characteristics of the strata
//! `D_J = X cap bigcap_{j in J} D_j`. Subsets `J` are bitmasks over the
//! component list; absent strata are empty. Optionally the table carries a
//! blow-up center `Y` (its codimension, which components contain it and
//! `chi(Y cap D_J)` for every stratum).

mod blowup;
mod cp_model;
mod json;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::{Error, Result};

pub use blowup::{
    blowup_transform, check_blowup_invariance, exceptional_multiplicity, induced_center_pairs,
    BlowUp, BlowupReport, CenterPairs,
};
pub use cp_model::{chi_d_via_fprime, cp_pair, CpPairModel, INFINITY_ID};
pub use json::{parse_pair, to_document, to_json, ComponentDoc, PairDocument, StratumDoc};

/// Bitmask over component indices.
pub type Subset = u32;

/// Largest supported number of divisor components.
pub const MAX_COMPONENTS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub mult: i64,
    pub contains_center: bool,
}

/// Input row of a stratum table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StratumEntry {
    pub chi: i64,
    pub nonempty: bool,
    /// `chi(Y cap D_J)`; `None` when the intersection is empty.
    pub chi_meet_center: Option<i64>,
}

/// A nonempty stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stratum {
    pub chi: i128,
    pub chi_meet_center: Option<i128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Center {
    pub codim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTable {
    num_components: usize,
    entries: BTreeMap<Subset, Stratum>,
    center: Option<Center>,
}

impl StratumTable {
    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Nonempty strata in mask order.
    pub fn entries(&self) -> impl Iterator<Item = (Subset, &Stratum)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn get(&self, subset: Subset) -> Option<&Stratum> {
        self.entries.get(&subset)
    }

    pub fn is_nonempty(&self, subset: Subset) -> bool {
        self.entries.contains_key(&subset)
    }

    /// `chi(D_J)`, zero for empty strata.
    pub fn chi(&self, subset: Subset) -> i128 {
        self.entries.get(&subset).map_or(0, |s| s.chi)
    }

    pub fn center(&self) -> Option<Center> {
        self.center
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncPair {
    d: i64,
    components: Vec<Component>,
    strata: StratumTable,
}

pub(crate) fn members(subset: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| subset & (1 << i) != 0)
}

fn size(subset: Subset) -> u32 {
    subset.count_ones()
}

/// `prod_{j in J} (-m_j) / (m_j + d)`, with the empty product equal to 1.
pub fn weight(d: i64, subset: Subset, mults: &[i64]) -> Result<Rational> {
    let mut acc = Rational::one();
    for j in members(subset) {
        let m = *mults.get(j).ok_or_else(|| {
            Error::Domain(format!("subset refers to component {j} beyond {}", mults.len()))
        })?;
        let den = BigInt::from(m) + BigInt::from(d);
        if den.is_zero() {
            return Err(Error::ForbiddenMultiplicity {
                component: format!("#{}", j + 1),
                mult: m,
            });
        }
        acc *= Rational::new(-BigInt::from(m), den);
    }
    Ok(acc)
}

impl SncPair {
    /// Validates and builds a pair. `rows` are `(subset, entry)`; rows marked
    /// empty only serve to check that no superset is marked nonempty.
    pub fn new(
        d: i64,
        components: Vec<Component>,
        rows: Vec<(Subset, StratumEntry)>,
        center: Option<Center>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidTable("d must be nonzero".into()));
        }
        let l = components.len();
        if l > MAX_COMPONENTS {
            return Err(Error::InvalidTable(format!(
                "{l} components exceed the supported maximum of {MAX_COMPONENTS}"
            )));
        }
        let mut seen = BTreeSet::new();
        for c in &components {
            if c.id.is_empty() {
                return Err(Error::InvalidTable("component ids must be nonempty".into()));
            }
            if !seen.insert(c.id.as_str()) {
                return Err(Error::InvalidTable(format!("duplicate component id `{}`", c.id)));
            }
            if c.mult == 0 {
                return Err(Error::InvalidTable(format!(
                    "component `{}` has multiplicity 0",
                    c.id
                )));
            }
            if i128::from(c.mult) == -i128::from(d) {
                return Err(Error::ForbiddenMultiplicity {
                    component: c.id.clone(),
                    mult: c.mult,
                });
            }
            if c.contains_center && center.is_none() {
                return Err(Error::InvalidTable(format!(
                    "component `{}` is marked as containing the center but no center is given",
                    c.id
                )));
            }
        }

        let full: Subset = if l == 32 { u32::MAX } else { (1u32 << l) - 1 };
        let name = |s: Subset| subset_name(&components, s);
        let mut entries = BTreeMap::new();
        let mut marked_empty = BTreeSet::new();
        for (subset, row) in &rows {
            if subset & !full != 0 {
                return Err(Error::InvalidTable(format!(
                    "stratum mask {subset:#b} refers to components beyond {l}"
                )));
            }
            if entries.contains_key(subset) || marked_empty.contains(subset) {
                return Err(Error::InvalidTable(format!(
                    "stratum {} is listed twice",
                    name(*subset)
                )));
            }
            if row.nonempty {
                if row.chi_meet_center.is_some() && center.is_none() {
                    return Err(Error::InvalidTable(format!(
                        "stratum {} gives chi_meet_center but the table has no center",
                        name(*subset)
                    )));
                }
                entries.insert(
                    *subset,
                    Stratum {
                        chi: row.chi.into(),
                        chi_meet_center: row.chi_meet_center.map(Into::into),
                    },
                );
            } else {
                if row.chi != 0 || row.chi_meet_center.is_some() {
                    return Err(Error::InvalidTable(format!(
                        "stratum {} is marked empty but carries nonzero data",
                        name(*subset)
                    )));
                }
                marked_empty.insert(*subset);
            }
        }

        if !entries.contains_key(&0) {
            return Err(Error::InvalidTable(
                "the entry for the empty subset (D_{} = X) is mandatory and must be nonempty"
                    .into(),
            ));
        }
        for &subset in entries.keys() {
            for j in members(subset) {
                let smaller = subset & !(1 << j);
                if marked_empty.contains(&smaller) {
                    return Err(Error::InvalidTable(format!(
                        "stratum {} is marked nonempty but its subset {} is marked empty; \
                         every superset of an empty stratum must be empty",
                        name(subset),
                        name(smaller)
                    )));
                }
                if !entries.contains_key(&smaller) {
                    return Err(Error::InvalidTable(format!(
                        "stratum {} is nonempty but its subset {} is omitted \
                         (omitted strata are empty); list {} or drop {}",
                        name(subset),
                        name(smaller),
                        name(smaller),
                        name(subset)
                    )));
                }
            }
        }

        let pair = SncPair {
            d,
            components,
            strata: StratumTable {
                num_components: l,
                entries,
                center,
            },
        };
        if let Some(center) = center {
            pair.validate_center(center)?;
        }
        Ok(pair)
    }

    fn validate_center(&self, center: Center) -> Result<()> {
        let name = |s: Subset| subset_name(&self.components, s);
        if center.codim == 0 {
            return Err(Error::Precondition("center codimension must be at least 1".into()));
        }
        let contains = self.contains_mask();
        let s = size(contains);
        if s > center.codim {
            return Err(Error::Precondition(format!(
                "{s} components contain the center but its codimension is only {}; \
                 transversality forces s <= r",
                center.codim
            )));
        }
        for c in self.components.iter().filter(|c| c.contains_center) {
            if c.mult <= 0 {
                return Err(Error::Precondition(format!(
                    "the center lies inside component `{}` of multiplicity {}; \
                     components containing the center must have positive multiplicity",
                    c.id, c.mult
                )));
            }
        }
        match self.strata.get(0).and_then(|s| s.chi_meet_center) {
            Some(_) => {}
            None => {
                return Err(Error::InvalidTable(
                    "chi_meet_center of the empty subset is chi(Y) and must be given".into(),
                ))
            }
        }
        for (subset, stratum) in self.strata.entries() {
            let outside = subset & !contains;
            let reference = self.strata.get(outside).and_then(|s| s.chi_meet_center);
            if stratum.chi_meet_center != reference {
                return Err(Error::InvalidTable(format!(
                    "chi_meet_center of {} must equal that of {} because Y lies in every \
                     component of {}",
                    name(subset),
                    name(outside),
                    name(subset & contains)
                )));
            }
            if stratum.chi_meet_center.is_some() {
                for j in members(subset) {
                    let smaller = subset & !(1 << j);
                    if self.strata.get(smaller).and_then(|s| s.chi_meet_center).is_none() {
                        return Err(Error::InvalidTable(format!(
                            "Y meets {} but not its superset-stratum {}",
                            name(subset),
                            name(smaller)
                        )));
                    }
                }
                if outside == subset && !self.strata.is_nonempty(subset | contains) {
                    return Err(Error::InvalidTable(format!(
                        "Y meets {} so the stratum {} containing that intersection must be listed",
                        name(subset),
                        name(subset | contains)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds a pair from data already known to be consistent.
    pub(crate) fn from_parts_unchecked(
        d: i64,
        components: Vec<Component>,
        entries: BTreeMap<Subset, Stratum>,
        center: Option<Center>,
    ) -> Self {
        let num_components = components.len();
        SncPair {
            d,
            components,
            strata: StratumTable {
                num_components,
                entries,
                center,
            },
        }
    }

    /// A pair with empty divisor and `chi(X) = chi`.
    pub fn empty_divisor(d: i64, chi: i64) -> Result<Self> {
        SncPair::new(
            d,
            vec![],
            vec![(
                0,
                StratumEntry {
                    chi,
                    nonempty: true,
                    chi_meet_center: None,
                },
            )],
            None,
        )
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn mults(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.mult).collect()
    }

    pub fn strata(&self) -> &StratumTable {
        &self.strata
    }

    pub fn center(&self) -> Option<Center> {
        self.strata.center
    }

    /// Mask of the components containing the blow-up center.
    pub fn contains_mask(&self) -> Subset {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains_center)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Mask for a list of component ids.
    pub fn subset_of(&self, ids: &[&str]) -> Result<Subset> {
        ids.iter().try_fold(0, |acc, id| {
            self.component_index(id)
                .map(|i| acc | (1 << i))
                .ok_or_else(|| Error::InvalidTable(format!("unknown component `{id}`")))
        })
    }

    pub fn subset_name(&self, subset: Subset) -> String {
        subset_name(&self.components, subset)
    }

    /// `w_d^J`.
    pub fn weight(&self, subset: Subset) -> Result<Rational> {
        weight(self.d, subset, &self.mults())
    }

    /// Replaces `(d, m_j)` by `(k d, k m_j)`.
    pub fn scaled(&self, k: i64) -> Result<SncPair> {
        let overflow = || Error::Domain(format!("scaling by {k} overflows"));
        let d = self.d.checked_mul(k).ok_or_else(overflow)?;
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    mult: c.mult.checked_mul(k).ok_or_else(overflow)?,
                    ..c.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SncPair {
            d,
            components,
            strata: self.strata.clone(),
        })
    }
}

pub(crate) fn subset_name(components: &[Component], subset: Subset) -> String {
    let ids: Vec<&str> = members(subset)
        .map(|i| components.get(i).map_or("?", |c| c.id.as_str()))
        .collect();
    format!("{{{}}}", ids.join(","))
}

/// `chi_d(X, D) = sum_J w_d^J chi(D_J)` over the nonempty strata.
pub fn chi_d(pair: &SncPair) -> Result<Rational> {
    let mults = pair.mults();
    pair.strata
        .entries()
        .try_fold(Rational::zero(), |acc, (subset, stratum)| {
            Ok(acc + weight(pair.d, subset, &mults)? * Rational::from_integer(stratum.chi.into()))
        })
}

/// The pair induced on `D_J`: components `D_{J+j}` for `j` outside `J` with
/// multiplicity `m_j`, and the strata of `X` containing `D_J` relabelled.
pub fn divisor_on_stratum(pair: &SncPair, subset: Subset) -> Result<SncPair> {
    if !pair.strata.is_nonempty(subset) {
        return Err(Error::Domain(format!(
            "stratum {} is empty",
            pair.subset_name(subset)
        )));
    }
    let kept: Vec<usize> = (0..pair.components.len())
        .filter(|i| subset & (1 << i) == 0)
        .collect();
    let components = kept
        .iter()
        .map(|&i| Component {
            contains_center: false,
            ..pair.components[i].clone()
        })
        .collect();
    let entries = pair
        .strata
        .entries()
        .filter(|(k, _)| k & subset == subset)
        .map(|(k, s)| {
            (
                compress(k & !subset, &kept),
                Stratum {
                    chi: s.chi,
                    chi_meet_center: None,
                },
            )
        })
        .collect();
    Ok(SncPair::from_parts_unchecked(pair.d, components, entries, None))
}

/// Re-indexes `subset` onto the positions of `kept`.
pub(crate) fn compress(subset: Subset, kept: &[usize]) -> Subset {
    kept.iter()
        .enumerate()
        .filter(|(_, &orig)| subset & (1 << orig) != 0)
        .fold(0, |acc, (new, _)| acc | (1 << new))
}

/// True iff `chi_d` is unchanged when `d` and every multiplicity are
/// multiplied by `k`.
pub fn scale_check(pair: &SncPair, k: i64) -> Result<bool> {
    if k < 1 {
        return Err(Error::Domain(format!("scale factor must be positive, got {k}")));
    }
    Ok(chi_d(pair)? == chi_d(&pair.scaled(k)?)?)
}

impl fmt::Display for SncPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("{}*D_{}", c.mult, c.id))
            .collect();
        write!(f, "d={} D={}", self.d, if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

#[cfg(test)]
mod tests;
