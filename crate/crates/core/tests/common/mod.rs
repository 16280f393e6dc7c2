//! Oracles shared by the integration tests and the acceptance run. None of
//! them call into the code they check beyond building inputs.
#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::select;
use reqcontract::logic::{Formula, FormulaSet};
use reqcontract::network::{EnactmentState, Network, RetryPolicy, Verdict};

pub const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

// ---- truth tables -------------------------------------------------------

pub type Assignment = BTreeMap<String, bool>;

pub fn tt_eval(f: &Formula, v: &Assignment) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => v[a.name()],
        Formula::Not(g) => !tt_eval(g, v),
        Formula::And(gs) => gs.iter().all(|g| tt_eval(g, v)),
        Formula::Or(gs) => gs.iter().any(|g| tt_eval(g, v)),
        Formula::Implies(a, b) => !tt_eval(a, v) || tt_eval(b, v),
        Formula::Iff(a, b) => tt_eval(a, v) == tt_eval(b, v),
    }
}

/// Every assignment to `names`.
pub fn assignments(names: &[String]) -> Vec<Assignment> {
    (0..1u32 << names.len())
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), mask >> i & 1 == 1))
                .collect()
        })
        .collect()
}

fn names_of<'a>(sets: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut names: Vec<String> = sets
        .into_iter()
        .flat_map(|f| f.atoms())
        .map(|a| a.name().to_string())
        .collect();
    names.sort();
    names.dedup();
    names
}

pub fn tt_satisfiable(fs: &[&Formula]) -> bool {
    let names = names_of(fs.iter().copied());
    assignments(&names)
        .iter()
        .any(|v| fs.iter().all(|f| tt_eval(f, v)))
}

pub fn tt_entails(premises: &[&Formula], conclusions: &[&Formula]) -> bool {
    let names = names_of(premises.iter().chain(conclusions).copied());
    assignments(&names).iter().all(|v| {
        !premises.iter().all(|f| tt_eval(f, v)) || conclusions.iter().all(|c| tt_eval(c, v))
    })
}

// ---- generators ---------------------------------------------------------

pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => select(&ATOMS[..]).prop_map(Formula::atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

pub fn arb_set(max: usize) -> impl Strategy<Value = FormulaSet> {
    prop::collection::vec(arb_formula(), 0..=max).prop_map(|v| v.into_iter().collect())
}

// ---- network walks ------------------------------------------------------

/// Predecessors per event, read straight from the link list.
pub fn link_preds(net: &Network) -> Vec<Vec<(usize, bool)>> {
    let mut preds = vec![Vec::new(); net.len()];
    for l in net.links() {
        let s = net.index_of(&l.source).unwrap();
        let t = net.index_of(&l.target).unwrap();
        preds[t].push((s, l.requires_pass));
    }
    preds
}

/// What the firing rule says should be enabled, computed from links alone.
/// `last_verdict` is the most recent verdict of the walk, cleared by a retry.
pub fn oracle_enabled(
    preds: &[Vec<(usize, bool)>],
    fired: &[bool],
    last_verdict: Option<Verdict>,
) -> Vec<usize> {
    (0..fired.len())
        .filter(|&i| {
            !fired[i]
                && preds[i]
                    .iter()
                    .all(|&(s, pass)| fired[s] && (!pass || last_verdict == Some(Verdict::Pass)))
        })
        .collect()
}

pub struct Step<'a> {
    pub before: &'a EnactmentState,
    pub after: &'a EnactmentState,
    pub index: usize,
    pub verdict: Option<Verdict>,
    pub retried: bool,
    /// Most recent verdict along the path before this step.
    pub last_verdict: Option<Verdict>,
    pub depth: usize,
}

#[derive(Debug, Default)]
pub struct WalkStats {
    pub maximal_sequences: u64,
    pub steps: u64,
}

/// Depth-first walk over every firing sequence reachable from the empty
/// state, trying each verdict in `verdicts` at the validation discharge.
/// `on_step` sees every firing, `on_leaf` every state with nothing enabled.
pub fn walk(
    net: &Network,
    policy: RetryPolicy,
    verdicts: &[Verdict],
    on_step: &mut dyn FnMut(&Step<'_>),
    on_leaf: &mut dyn FnMut(&EnactmentState, Option<Verdict>),
) -> WalkStats {
    let mut stats = WalkStats::default();
    let verdict_event = net.verdict_event();
    let mut stack = vec![(EnactmentState::new(), None::<Verdict>, 0usize)];
    while let Some((st, last, depth)) = stack.pop() {
        let enabled = net.enabled_indices(&st);
        if enabled.is_empty() {
            stats.maximal_sequences += 1;
            on_leaf(&st, last);
            continue;
        }
        for i in enabled {
            let choices: Vec<Option<Verdict>> = if Some(i) == verdict_event {
                verdicts.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for v in choices {
                let (next, retried) = net
                    .fire_index(&st, i, v, policy)
                    .expect("enabled events fire");
                stats.steps += 1;
                on_step(&Step {
                    before: &st,
                    after: &next,
                    index: i,
                    verdict: v,
                    retried,
                    last_verdict: last,
                    depth,
                });
                let new_last = if retried { None } else { v.or(last) };
                stack.push((next, new_last, depth + 1));
            }
        }
    }
    stats
}

pub fn fired_vec(net: &Network, st: &EnactmentState) -> Vec<bool> {
    (0..net.len()).map(|i| st.is_fired(i)).collect()
}

/// Number of topological orders of the network's link graph, by dynamic
/// programming over subsets of fired events.
pub fn count_linear_extensions(net: &Network) -> u64 {
    let n = net.len();
    assert!(n <= 24);
    let mut need = vec![0u32; n];
    for l in net.links() {
        let s = net.index_of(&l.source).unwrap();
        let t = net.index_of(&l.target).unwrap();
        need[t] |= 1 << s;
    }
    let mut ways = vec![0u64; 1 << n];
    ways[0] = 1;
    for mask in 0..(1usize << n) {
        let w = ways[mask];
        if w == 0 {
            continue;
        }
        for i in 0..n {
            if mask >> i & 1 == 0 && need[i] as usize & !mask == 0 {
                ways[mask | 1 << i] += w;
            }
        }
    }
    ways[(1 << n) - 1]
}

/// One topological order by Kahn's algorithm, lowest index first.
pub fn kahn_order(net: &Network) -> Vec<usize> {
    let preds = link_preds(net);
    let mut done = vec![false; net.len()];
    let mut order = Vec::new();
    while order.len() < net.len() {
        let next = (0..net.len())
            .find(|&i| !done[i] && preds[i].iter().all(|&(s, _)| done[s]))
            .expect("acyclic");
        done[next] = true;
        order.push(next);
    }
    order
}
