mod common;

use common::{arb_formula, arb_set, tt_entails, tt_eval, tt_satisfiable, Assignment};
use proptest::prelude::*;
use reqcontract::logic::{
    check_default_rp, entails, is_satisfiable, parse_formula, Formula, FormulaSet, RpInstance,
};

peg::parser! {
    /// Independent grammar for the formula syntax, used to cross-check the
    /// hand-written parser.
    grammar reference() for str {
        rule ws() = [' ' | '\t' | '\n' | '\r']*
        rule word_char() = ['a'..='z' | 'A'..='Z' | '0'..='9' | '_']
        rule word() -> &'input str
            = $(['a'..='z' | 'A'..='Z' | '_'] word_char()*)

        pub rule formula() -> Formula = ws() f:iff() ws() { f }

        rule iff() -> Formula
            = first:imp() rest:(ws() "<->" ws() r:imp() { r })*
            { rest.into_iter().fold(first, Formula::iff) }

        rule imp() -> Formula
            = l:or() r:(ws() "->" ws() r:imp() { r })?
            { match r { Some(r) => Formula::implies(l, r), None => l } }

        rule or() -> Formula
            = v:(and() ++ (ws() "|" ws()))
            { if v.len() == 1 { v.into_iter().next().unwrap() } else { Formula::Or(v) } }

        rule and() -> Formula
            = v:(unary() ++ (ws() "&" ws()))
            { if v.len() == 1 { v.into_iter().next().unwrap() } else { Formula::And(v) } }

        rule unary() -> Formula
            = "!" ws() f:unary() { Formula::not(f) }
            / w:word() ws() f:unary() {? if w == "not" { Ok(Formula::not(f)) } else { Err("not") } }
            / primary()

        rule primary() -> Formula
            = "(" ws() f:iff() ws() ")" { f }
            / w:word() {?
                match w {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "not" => Err("operand"),
                    _ => Ok(Formula::atom(w)),
                }
            }
    }
}

fn set_refs(s: &FormulaSet) -> Vec<&Formula> {
    s.iter().collect()
}

fn assignment(v: &reqcontract::logic::Valuation) -> Assignment {
    v.iter().map(|(a, b)| (a.name().to_string(), *b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn satisfiability_matches_truth_table(s in arb_set(4)) {
        let fs = set_refs(&s);
        let got = is_satisfiable(fs.iter().copied());
        prop_assert_eq!(got.satisfiable, tt_satisfiable(&fs));
        if let Some(m) = got.model {
            let v = assignment(&m);
            for f in &fs {
                prop_assert!(tt_eval(f, &v), "model fails {}", f);
            }
        }
    }

    #[test]
    fn entailment_matches_truth_table(k in arb_set(3), r in arb_set(2)) {
        let (ks, rs) = (set_refs(&k), set_refs(&r));
        let got = entails(ks.iter().copied(), rs.iter().copied());
        prop_assert_eq!(got.holds, tt_entails(&ks, &rs));
        if let (Some(i), Some(m)) = (got.failing, &got.countermodel) {
            let v = assignment(m);
            prop_assert!(ks.iter().all(|f| tt_eval(f, &v)));
            prop_assert!(!tt_eval(rs[i], &v));
            // the failing conclusion is the first one that does not follow
            for c in &rs[..i] {
                prop_assert!(tt_entails(&ks, &[c]));
            }
        }
    }

    #[test]
    fn entailment_is_monotone(k in arb_set(3), extra in arb_formula(), r in arb_set(2)) {
        if entails(k.iter(), r.iter()).holds {
            let mut bigger = k.clone();
            bigger.insert(extra);
            prop_assert!(entails(bigger.iter(), r.iter()).holds);
        }
    }

    #[test]
    fn rp_parts_are_independent(k in arb_set(2), s in arb_set(2), r in arb_set(2)) {
        let v = check_default_rp(&RpInstance { k: k.clone(), s: s.clone(), r: r.clone() });
        let prem: Vec<&Formula> = k.iter().chain(s.iter()).collect();
        prop_assert_eq!(v.consistent, tt_satisfiable(&prem));
        prop_assert_eq!(v.entails, tt_entails(&prem, &set_refs(&r)));
        prop_assert_eq!(v.passes(), v.consistent && v.entails);
        if let Some(w) = v.witness() {
            let w = assignment(w);
            prop_assert!(prem.iter().all(|f| tt_eval(f, &w)));
        }
    }

    #[test]
    fn printer_round_trips(f in arb_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f.clone());
        prop_assert_eq!(reference::formula(&text).unwrap(), f);
    }

    #[test]
    fn eval_agrees_with_oracle(f in arb_formula(), bits in 0u32..16) {
        let v: Assignment = common::ATOMS
            .iter()
            .enumerate()
            .map(|(i, n)| (n.to_string(), bits >> i & 1 == 1))
            .collect();
        let val = v
            .iter()
            .map(|(n, b)| (reqcontract::logic::Atom::new(n.as_str()).unwrap(), *b))
            .collect();
        prop_assert_eq!(f.eval(&val).unwrap(), tt_eval(&f, &v));
    }
}

#[test]
fn reference_grammar_agrees_on_handwritten_inputs() {
    for text in [
        "a",
        "!a",
        "not a",
        "not not a",
        "nota",
        "a & b & c",
        "(a & b) & c",
        "a | b & c",
        "a -> b -> c",
        "(a -> b) -> c",
        "a <-> b <-> c",
        "a <-> (b <-> c)",
        "!a & b -> c | d <-> a",
        "true & false | x_1",
        "  p1\n & (p2\t| p3 ) ",
        "p1 & p2 -> p3",
    ] {
        assert_eq!(
            parse_formula(text).unwrap(),
            reference::formula(text).unwrap(),
            "{text:?}"
        );
    }
}

#[test]
fn both_parsers_reject_the_same_junk() {
    for text in [
        "", "a &", "& a", "(a", "a)", "a - b", "a <- b", "a b", "not", "a % b", "!",
    ] {
        assert!(parse_formula(text).is_err(), "{text:?}");
        assert!(reference::formula(text).is_err(), "{text:?}");
    }
}
