use indexmap::IndexMap;
use proptest::prelude::*;
use proptest::sample::select;
use reqcontract::logic::{check_default_rp, parse_formula, Formula, FormulaSet, RpInstance};
use reqcontract::roles::RoleId;
use reqcontract::transfer::{
    apply_transfer, divergence, validate_as_evaluator, ArtifactSets, TransferMap,
};

const POOL: [&str; 8] = [
    "p1",
    "p2",
    "p3",
    "p4",
    "p1 & p2 -> p3",
    "!p4",
    "p2 | p4",
    "p3 <-> p1",
];

fn arb_formula_from_pool() -> impl Strategy<Value = Formula> {
    select(&POOL[..]).prop_map(|t| parse_formula(t).unwrap())
}

fn arb_pool_set() -> impl Strategy<Value = FormulaSet> {
    prop::collection::vec(arb_formula_from_pool(), 0..6).prop_map(|v| v.into_iter().collect())
}

fn arb_sets() -> impl Strategy<Value = ArtifactSets> {
    (
        arb_pool_set(),
        arb_pool_set(),
        prop::option::of(arb_pool_set()),
    )
        .prop_map(|(k, r, s)| {
            ArtifactSets::new(RoleId::Evaluator, k, r, Some(s.unwrap_or_default()), None).unwrap()
        })
}

fn arb_map() -> impl Strategy<Value = TransferMap> {
    (
        arb_pool_set(),
        prop::collection::vec((arb_formula_from_pool(), arb_formula_from_pool()), 0..3),
        arb_pool_set(),
    )
        .prop_map(|(drops, subs, adds)| {
            let subs: IndexMap<Formula, Formula> = subs
                .into_iter()
                .filter(|(f, _)| !drops.contains(f))
                .collect();
            let adds: FormulaSet = adds
                .iter()
                .filter(|f| !drops.contains(f))
                .cloned()
                .collect();
            TransferMap::new(drops, subs, adds).unwrap()
        })
}

/// Symmetric difference counted by brute force over the pool's texts.
fn sym_diff(a: &FormulaSet, b: &FormulaSet) -> usize {
    let all: Vec<&Formula> = a.iter().chain(b.iter()).collect();
    let mut seen = Vec::new();
    for f in all {
        if !seen.contains(&f) {
            seen.push(f);
        }
    }
    seen.into_iter()
        .filter(|f| a.contains(f) != b.contains(f))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn divergence_is_a_metric(a in arb_sets(), b in arb_sets(), c in arb_sets()) {
        prop_assert_eq!(divergence(&a, &a), 0);
        prop_assert_eq!(divergence(&a, &b), divergence(&b, &a));
        prop_assert!(divergence(&a, &c) <= divergence(&a, &b) + divergence(&b, &c));
        prop_assert_eq!(divergence(&a, &b) == 0, a.k == b.k && a.r == b.r && a.s() == b.s());
    }

    #[test]
    fn divergence_counts_symmetric_differences(a in arb_sets(), b in arb_sets()) {
        let expect = sym_diff(&a.k, &b.k) + sym_diff(&a.r, &b.r) + sym_diff(a.s().unwrap(), b.s().unwrap());
        prop_assert_eq!(divergence(&a, &b), expect);
    }

    #[test]
    fn empty_map_is_identity(a in arb_sets()) {
        let out = apply_transfer(&a, &TransferMap::identity(), RoleId::Evaluator);
        prop_assert_eq!(&out, &a);
        prop_assert_eq!(divergence(&a, &out), 0);
    }

    #[test]
    fn transfer_follows_its_definition(a in arb_sets(), t in arb_map()) {
        let out = apply_transfer(&a, &t, RoleId::Evaluator);
        let json = serde_json::to_value(&t).unwrap();
        let drops: Vec<Formula> = serde_json::from_value(json["drops"].clone()).unwrap();
        let subs: Vec<(Formula, Formula)> = json["substitutions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (serde_json::from_value(e["from"].clone()).unwrap(), serde_json::from_value(e["to"].clone()).unwrap()))
            .collect();
        let adds: Vec<Formula> = serde_json::from_value(json["additions"].clone()).unwrap();
        let map = |s: &FormulaSet| -> FormulaSet {
            s.iter()
                .filter(|f| !drops.contains(f))
                .map(|f| subs.iter().find(|(from, _)| from == f).map_or(f, |(_, to)| to).clone())
                .collect()
        };
        let mut k = map(&a.k);
        for f in adds {
            k.insert(f);
        }
        prop_assert_eq!(&out.k, &k);
        prop_assert_eq!(&out.r, &map(&a.r));
        prop_assert_eq!(out.s().cloned(), Some(map(a.s().unwrap())));
    }

    /// The Evaluator's verdict depends only on the Evaluator's own sets.
    #[test]
    fn verdict_locality(ev in arb_sets(), other in arb_sets()) {
        let v = validate_as_evaluator(&ev).unwrap();
        let direct = check_default_rp(&RpInstance { k: ev.k.clone(), s: ev.s().unwrap().clone(), r: ev.r.clone() });
        prop_assert_eq!(&v, &direct);
        // rebuilding the same sets from any other source gives the same verdict
        let diff = |from: &FormulaSet, to: &FormulaSet| -> (FormulaSet, FormulaSet) {
            (from.iter().filter(|f| !to.contains(f)).cloned().collect(), to.iter().filter(|f| !from.contains(f)).cloned().collect())
        };
        let maker = ArtifactSets::new(RoleId::Maker, other.k.clone(), ev.r.clone(), ev.s().cloned(), None).unwrap();
        let (drop_k, add_k) = diff(&maker.k, &ev.k);
        let t = TransferMap::new(drop_k, IndexMap::new(), add_k).unwrap();
        let rebuilt = apply_transfer(&maker, &t, RoleId::Evaluator);
        prop_assert_eq!(&rebuilt.k, &ev.k);
        // drops also apply to r and s, so compare only when those survived
        if rebuilt.r == ev.r && rebuilt.s() == ev.s() {
            prop_assert_eq!(validate_as_evaluator(&rebuilt).unwrap(), v);
        }
    }
}

#[test]
fn requester_sets_never_carry_a_specification() {
    let maker = ArtifactSets::new(
        RoleId::Maker,
        FormulaSet::parse_all(&["p1"]).unwrap(),
        FormulaSet::parse_all(&["p3"]).unwrap(),
        Some(FormulaSet::parse_all(&["p2"]).unwrap()),
        Some("P^P".into()),
    )
    .unwrap();
    let back = apply_transfer(&maker, &TransferMap::identity(), RoleId::Requester);
    assert_eq!(back.s(), None);
    assert_eq!(back.product(), None);
    assert_eq!(back.k, maker.k);
}
