//! Random consistent stratum tables with a blow-up center.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Center, Component, SncPair, StratumEntry, Subset};

fn random_subset<R: Rng>(rng: &mut R, pool: &[usize]) -> Subset {
    pool.iter()
        .filter(|_| rng.gen_bool(0.45))
        .fold(0, |acc, &i| acc | (1 << i))
}

fn down_closure(generators: impl IntoIterator<Item = Subset>) -> BTreeSet<Subset> {
    let mut out = BTreeSet::new();
    for g in generators {
        let mut sub = g;
        loop {
            out.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & g;
        }
    }
    out
}

/// A random pair with `d > 0`, at most `max_components` components and a
/// center whose data satisfy every validator rule.
pub fn random_center_pair<R: Rng>(rng: &mut R, max_components: usize) -> crate::Result<SncPair> {
    let l = rng.gen_range(0..=max_components.min(super::MAX_COMPONENTS - 1));
    let d: i64 = rng.gen_range(1..=5);
    let r: u32 = rng.gen_range(1..=5);
    let s = rng.gen_range(0..=(r as usize).min(l));

    let mut order: Vec<usize> = (0..l).collect();
    order.shuffle(rng);
    let contains: Subset = order[..s].iter().fold(0, |acc, &i| acc | (1 << i));
    let outside: Vec<usize> = (0..l).filter(|i| contains & (1 << i) == 0).collect();
    let all: Vec<usize> = (0..l).collect();

    let components = (0..l)
        .map(|i| {
            let inside = contains & (1 << i) != 0;
            let mult = if inside {
                rng.gen_range(1..=9)
            } else {
                loop {
                    let m = rng.gen_range(-12..=12);
                    if m != 0 && m != -d {
                        break m;
                    }
                }
            };
            Component {
                id: format!("D{}", i + 1),
                mult,
                contains_center: inside,
            }
        })
        .collect();

    let meet_gens: Vec<Subset> = (0..rng.gen_range(0..=3))
        .map(|_| random_subset(rng, &outside))
        .chain(std::iter::once(0))
        .collect();
    let meets = down_closure(meet_gens);
    let meet_chi: BTreeMap<Subset, i64> = meets
        .iter()
        .map(|&a| (a, rng.gen_range(-4..=10)))
        .collect();

    let strata_gens: Vec<Subset> = (0..rng.gen_range(0..=4))
        .map(|_| random_subset(rng, &all))
        .chain(meets.iter().map(|&a| a | contains))
        .collect();
    let rows = down_closure(strata_gens)
        .into_iter()
        .map(|j| {
            (
                j,
                StratumEntry {
                    chi: rng.gen_range(-5..=10),
                    nonempty: true,
                    chi_meet_center: meet_chi.get(&(j & !contains)).copied(),
                },
            )
        })
        .collect();

    SncPair::new(d, components, rows, Some(Center { codim: r }))
}
