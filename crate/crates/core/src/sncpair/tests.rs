use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rational::{int, ratio};

fn comp(id: &str, mult: i64, contains_center: bool) -> Component {
    Component {
        id: id.into(),
        mult,
        contains_center,
    }
}

fn row(subset: Subset, chi: i64, meet: Option<i64>) -> (Subset, StratumEntry) {
    (
        subset,
        StratumEntry {
            chi,
            nonempty: true,
            chi_meet_center: meet,
        },
    )
}

fn empty_row(subset: Subset) -> (Subset, StratumEntry) {
    (
        subset,
        StratumEntry {
            chi: 0,
            nonempty: false,
            chi_meet_center: None,
        },
    )
}

/// CP^2 with the coordinate triangle, d = 1, m = (1, 1, -5), center D_1 cap D_2.
fn triangle() -> SncPair {
    let components = vec![comp("1", 1, true), comp("2", 1, true), comp("inf", -5, false)];
    let mut rows = Vec::new();
    for j in 0u32..8 {
        if j.count_ones() <= 2 {
            let meet = (j & 0b100 == 0).then_some(1);
            rows.push(row(j, 3 - j.count_ones() as i64, meet));
        }
    }
    SncPair::new(1, components, rows, Some(Center { codim: 2 })).unwrap()
}

#[test]
fn weight_examples() {
    assert_eq!(weight(1, 0, &[]).unwrap(), int(1));
    assert_eq!(weight(1, 0b11, &[2, 3]).unwrap(), ratio(1, 2));
    assert_eq!(weight(1, 0b1, &[-5]).unwrap(), ratio(-5, 4));
    assert!(matches!(
        weight(2, 0b1, &[-2]),
        Err(Error::ForbiddenMultiplicity { .. })
    ));
}

#[test]
fn empty_divisor_chi_d() {
    let pair = SncPair::empty_divisor(3, 7).unwrap();
    assert_eq!(chi_d(&pair).unwrap(), int(7));
}

#[test]
fn cp1_model() {
    let (model, pair) = cp_pair(1, 1, 1, &[1]).unwrap();
    assert_eq!(model.m_infinity, -3);
    assert_eq!(pair.mults(), vec![1, -3]);
    assert_eq!(pair.strata().chi(0), 2);
    assert_eq!(pair.strata().chi(0b01), 1);
    assert_eq!(pair.strata().chi(0b10), 1);
    assert!(!pair.strata().is_nonempty(0b11));
    assert!(chi_d(&pair).unwrap().is_zero());
    assert!(chi_d_via_fprime(&model).is_zero());
}

#[test]
fn cp2_models() {
    let (model, pair) = cp_pair(2, 2, 1, &[1, 1]).unwrap();
    assert_eq!(model.m_infinity, -5);
    assert!(chi_d(&pair).unwrap().is_zero());
    assert!(chi_d_via_fprime(&model).is_zero());

    let (model, pair) = cp_pair(2, 0, 1, &[]).unwrap();
    assert_eq!(model.m_infinity, -3);
    assert!(chi_d(&pair).unwrap().is_zero());
}

#[test]
fn cp_model_rejects_bad_parameters() {
    assert!(cp_pair(2, 2, 1, &[1, -1]).is_err());
    assert!(cp_pair(2, 3, 1, &[1, 1, 1]).is_err());
    assert!(cp_pair(2, 1, 0, &[1]).is_err());
    assert!(cp_pair(2, 2, 1, &[1]).is_err());
}

#[test]
fn divisor_on_strata() {
    let (_, pair) = cp_pair(2, 2, 1, &[1, 1]).unwrap();
    assert_eq!(divisor_on_stratum(&pair, 0).unwrap().strata(), pair.strata());

    let on_d1 = divisor_on_stratum(&pair, 0b001).unwrap();
    let ids: Vec<&str> = on_d1.components().iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["2", "inf"]);
    assert_eq!(on_d1.mults(), vec![1, -5]);
    assert_eq!(on_d1.strata().chi(0), 2);
    assert!(!on_d1.strata().is_nonempty(0b11));

    let deepest = divisor_on_stratum(&pair, 0b011).unwrap();
    assert_eq!(deepest.components().len(), 1);
    assert!(divisor_on_stratum(&pair, 0b111).is_err());
}

#[test]
fn triangle_blowup() {
    let pair = triangle();
    let blown = blowup_transform(&pair).unwrap();
    assert_eq!(blown.m0, 3);
    let new = &blown.pair;
    let s = |ids: &[&str]| new.subset_of(ids).unwrap();
    let t = new.strata();
    assert_eq!(t.chi(0), 4);
    assert_eq!(t.chi(s(&["E"])), 2);
    assert_eq!(t.chi(s(&["1"])), 2);
    assert_eq!(t.chi(s(&["2"])), 2);
    assert_eq!(t.chi(s(&["inf"])), 2);
    assert_eq!(t.chi(s(&["E", "1"])), 1);
    assert_eq!(t.chi(s(&["E", "2"])), 1);
    assert!(!t.is_nonempty(s(&["1", "2"])));
    assert_eq!(t.chi(s(&["1", "inf"])), 1);
    assert_eq!(t.chi(s(&["2", "inf"])), 1);
    assert!(!t.is_nonempty(s(&["E", "inf"])));

    let report = check_blowup_invariance(&pair).unwrap();
    assert!(report.before.is_zero());
    assert!(report.after.is_zero());
    assert!(report.equal);
    assert_eq!(report.chi_d_center, int(1));
    assert_eq!(report.chi_d_exceptional, int(1));
}

#[test]
fn point_blowup_with_empty_divisor() {
    for (chi, d, r) in [(5, 1, 2), (-3, 2, 3), (1, 4, 1)] {
        let pair = SncPair::new(d, vec![], vec![row(0, chi, Some(1))], Some(Center { codim: r }))
            .unwrap();
        let report = check_blowup_invariance(&pair).unwrap();
        assert_eq!(report.m0, (i64::from(r) - 1) * d);
        assert_eq!(report.before, int(chi));
        assert!(report.equal);
    }
}

#[test]
fn blowup_needs_center_and_positive_d() {
    let (_, pair) = cp_pair(1, 1, 1, &[1]).unwrap();
    assert!(matches!(blowup_transform(&pair), Err(Error::Precondition(_))));
    let negative = SncPair::new(-1, vec![], vec![row(0, 1, Some(1))], Some(Center { codim: 2 }))
        .unwrap();
    assert!(matches!(blowup_transform(&negative), Err(Error::Precondition(_))));
}

#[test]
fn exceptional_id_avoids_clash() {
    let components = vec![comp("E", 2, true)];
    let rows = vec![row(0, 2, Some(1)), row(1, 1, Some(1))];
    let pair = SncPair::new(1, components, rows, Some(Center { codim: 2 })).unwrap();
    let blown = blowup_transform(&pair).unwrap();
    assert_eq!(blown.pair.components()[1].id, "E'");
}

#[test]
fn rejects_nonempty_superset_of_empty_stratum() {
    let components = vec![comp("a", 1, false), comp("b", 2, false)];
    let rows = vec![row(0, 3, None), row(1, 2, None), empty_row(2), row(3, 1, None)];
    let err = SncPair::new(1, components, rows, None).unwrap_err();
    assert!(err.to_string().contains("marked empty"), "{err}");
}

#[test]
fn rejects_omitted_subset() {
    let components = vec![comp("a", 1, false), comp("b", 2, false)];
    let rows = vec![row(0, 3, None), row(1, 2, None), row(3, 1, None)];
    let err = SncPair::new(1, components, rows, None).unwrap_err();
    assert!(err.to_string().contains("omitted"), "{err}");
}

#[test]
fn rejects_forbidden_multiplicity() {
    let err = SncPair::new(2, vec![comp("a", -2, false)], vec![row(0, 1, None)], None).unwrap_err();
    assert!(matches!(err, Error::ForbiddenMultiplicity { mult: -2, .. }));
}

#[test]
fn rejects_center_in_negative_component() {
    let rows = vec![row(0, 1, Some(1)), row(1, 1, Some(1))];
    let err = SncPair::new(1, vec![comp("a", -3, true)], rows, Some(Center { codim: 2 }))
        .unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    assert!(err.to_string().contains("positive multiplicity"));
}

#[test]
fn rejects_inconsistent_center_data() {
    // chi(Y cap D_a) must equal chi(Y) when Y lies in D_a.
    let rows = vec![row(0, 1, Some(1)), row(1, 1, Some(2))];
    assert!(SncPair::new(1, vec![comp("a", 1, true)], rows, Some(Center { codim: 2 })).is_err());
    // missing empty-subset entry
    assert!(SncPair::new(1, vec![], vec![], None).is_err());
    // chi_meet_center without a center
    assert!(SncPair::new(1, vec![], vec![row(0, 1, Some(1))], None).is_err());
    // more containing components than the codimension
    let rows = vec![row(0, 1, Some(1)), row(1, 1, Some(1)), row(2, 1, Some(1)), row(3, 1, Some(1))];
    let comps = vec![comp("a", 1, true), comp("b", 1, true)];
    assert!(SncPair::new(1, comps, rows, Some(Center { codim: 1 })).is_err());
}

#[test]
fn json_round_trip() {
    let pair = triangle();
    let text = to_json(&pair).unwrap();
    assert_eq!(parse_pair(&text).unwrap(), pair);
}

#[test]
fn json_is_strict() {
    let text = r#"{"d":1,"components":[],"strata":[{"subset":[],"chi":7}],"extra":1}"#;
    assert!(matches!(parse_pair(text), Err(Error::Parse(_))));
    let text = r#"{"d":1,"components":[],"strata":[{"subset":["x"],"chi":7}]}"#;
    assert!(matches!(parse_pair(text), Err(Error::InvalidTable(_))));
    let text = r#"{"d":1,"components":[],"strata":[{"subset":[],"chi":7}]}"#;
    assert_eq!(chi_d(&parse_pair(text).unwrap()).unwrap(), int(7));
}

#[test]
fn scaling_examples() {
    assert_eq!(
        weight(1, 0b11, &[2, 3]).unwrap(),
        weight(2, 0b11, &[4, 6]).unwrap()
    );
    let (_, pair) = cp_pair(1, 1, 1, &[1]).unwrap();
    assert!(scale_check(&pair, 3).unwrap());
    assert!(chi_d(&pair.scaled(3).unwrap()).unwrap().is_zero());
    assert!(scale_check(&pair, 0).is_err());
}

proptest! {
    #[test]
    fn weight_is_multiplicative(
        d in 1i64..6,
        mults in proptest::collection::vec((1i64..10, any::<bool>()), 1..8),
        a in any::<u8>(),
        b in any::<u8>(),
    ) {
        let mults: Vec<i64> = mults.into_iter().map(|(m, neg)| if neg { -m - d - 1 } else { m }).collect();
        let full = (1u32 << mults.len()) - 1;
        let a = u32::from(a) & full;
        let b = u32::from(b) & full & !a;
        prop_assert_eq!(
            weight(d, a | b, &mults).unwrap(),
            weight(d, a, &mults).unwrap() * weight(d, b, &mults).unwrap()
        );
    }

    #[test]
    fn cp_models_vanish(d in 1i64..=5, r in 1u32..=6, raw in proptest::collection::vec(1i64..=9, 6)) {
        for s in 0..=r {
            let (model, pair) = cp_pair(r, s, d, &raw[..s as usize]).unwrap();
            let direct = chi_d(&pair).unwrap();
            prop_assert!(direct.is_zero());
            prop_assert_eq!(direct, chi_d_via_fprime(&model));
        }
    }

    #[test]
    fn synthetic_blowups_preserve_chi_d(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = synthetic::random_center_pair(&mut rng, 8).unwrap();
        let report = check_blowup_invariance(&pair).unwrap();
        prop_assert!(report.equal, "{} vs {}", report.before, report.after);
    }

    #[test]
    fn scaling_preserves_chi_d(seed in any::<u64>(), k in prop::sample::select(vec![2i64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = synthetic::random_center_pair(&mut rng, 8).unwrap();
        prop_assert!(scale_check(&pair, k).unwrap());
    }
}
