use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{members, Center, Component, SncPair, StratumEntry, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub id: String,
    pub mult: i64,
    #[serde(default)]
    pub contains_center: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterDoc {
    pub codim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub subset: Vec<String>,
    pub chi: i64,
    #[serde(default = "default_true")]
    pub nonempty: bool,
    #[serde(default)]
    pub chi_meet_center: Option<i64>,
}

fn default_true() -> bool {
    true
}

/// On-disk form of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub d: i64,
    pub components: Vec<ComponentDoc>,
    #[serde(default)]
    pub center: Option<CenterDoc>,
    pub strata: Vec<StratumDoc>,
}

impl PairDocument {
    pub fn into_pair(self) -> Result<SncPair> {
        if self.components.len() > super::MAX_COMPONENTS {
            return Err(Error::InvalidTable(format!(
                "{} components exceed the supported maximum of {}",
                self.components.len(),
                super::MAX_COMPONENTS
            )));
        }
        let index = |id: &str| self.components.iter().position(|c| c.id == id);
        let mut rows = Vec::with_capacity(self.strata.len());
        for (n, s) in self.strata.iter().enumerate() {
            let mut mask: Subset = 0;
            for id in &s.subset {
                let i = index(id).ok_or_else(|| {
                    Error::InvalidTable(format!(
                        "strata[{n}] refers to unknown component `{id}`"
                    ))
                })?;
                if mask & (1 << i) != 0 {
                    return Err(Error::InvalidTable(format!(
                        "strata[{n}] lists component `{id}` twice"
                    )));
                }
                mask |= 1 << i;
            }
            rows.push((
                mask,
                StratumEntry {
                    chi: s.chi,
                    nonempty: s.nonempty,
                    chi_meet_center: s.chi_meet_center,
                },
            ));
        }
        let components = self
            .components
            .into_iter()
            .map(|c| Component {
                id: c.id,
                mult: c.mult,
                contains_center: c.contains_center,
            })
            .collect();
        SncPair::new(
            self.d,
            components,
            rows,
            self.center.map(|c| Center { codim: c.codim }),
        )
    }
}

/// Parses and validates a pair document.
pub fn parse_pair(text: &str) -> Result<SncPair> {
    let doc: PairDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_pair()
}

pub fn to_document(pair: &SncPair) -> Result<PairDocument> {
    let components = pair.components();
    let mut strata = Vec::new();
    for (k, s) in pair.strata().entries() {
        strata.push(StratumDoc {
            subset: members(k).map(|i| components[i].id.clone()).collect(),
            chi: narrow(s.chi)?,
            nonempty: true,
            chi_meet_center: s.chi_meet_center.map(narrow).transpose()?,
        });
    }
    Ok(PairDocument {
        d: pair.d(),
        components: components
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.clone(),
                mult: c.mult,
                contains_center: c.contains_center,
            })
            .collect(),
        center: pair.center().map(|c| CenterDoc { codim: c.codim }),
        strata,
    })
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Domain(format!("Euler characteristic {v} overflows 64 bits")))
}

pub fn to_json(pair: &SncPair) -> Result<String> {
    serde_json::to_string_pretty(&to_document(pair)?).map_err(|e| Error::Domain(e.to_string()))
}
