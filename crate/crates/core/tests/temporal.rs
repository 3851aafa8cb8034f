mod common;

use common::{arb_formula, arb_trace};
use fondgr::automata::{lift, to_dfa, AutomatonOptions};
use fondgr::logic::{evaluate, evaluate_as, parse_formula, to_nnf, Atom, Dialect, Formula};
use proptest::prelude::*;

fn dialect_of(f: &Formula) -> Dialect {
    f.dialect().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_formulas_parse_back(f in prop_oneof![arb_formula(false), arb_formula(true)]) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn nnf_preserves_future_semantics(f in arb_formula(false), t in arb_trace()) {
        prop_assert_eq!(evaluate_as(&to_nnf(&f), &t, Dialect::Ltlf), evaluate_as(&f, &t, Dialect::Ltlf));
    }

    #[test]
    fn nnf_preserves_past_semantics(f in arb_formula(true), t in arb_trace()) {
        prop_assume!(!t.is_empty());
        prop_assert_eq!(evaluate_as(&to_nnf(&f), &t, Dialect::Pltlf), evaluate_as(&f, &t, Dialect::Pltlf));
    }

    #[test]
    fn ltlf_automaton_agrees_with_semantics(f in arb_formula(false), ts in prop::collection::vec(arb_trace(), 8)) {
        let d = to_dfa(&f, &AutomatonOptions::default()).unwrap();
        for t in &ts {
            prop_assert_eq!(d.accepts(t), evaluate(&f, t), "{} on {:?}", f, t);
        }
    }

    #[test]
    fn pltlf_automaton_agrees_with_semantics(f in arb_formula(true), ts in prop::collection::vec(arb_trace(), 8)) {
        let d = to_dfa(&f, &AutomatonOptions::default()).unwrap();
        for t in &ts {
            prop_assert_eq!(d.accepts(t), evaluate(&f, t), "{} on {:?}", f, t);
        }
    }

    #[test]
    fn automata_are_minimal(f in prop_oneof![arb_formula(false), arb_formula(true)]) {
        let d = to_dfa(&f, &AutomatonOptions::default()).unwrap();
        let m = d.minimize();
        prop_assert_eq!(m.num_states(), d.num_states());
        prop_assert!(m.is_isomorphic(&d));
    }

    #[test]
    fn future_duals(f in arb_formula(false), t in arb_trace()) {
        let g = Formula::always(f.clone());
        let dual = Formula::not(Formula::eventually(Formula::not(f.clone())));
        prop_assert_eq!(evaluate(&g, &t), evaluate_as(&dual, &t, dialect_of(&g)));
        let wx = Formula::weak_next(f.clone());
        let dual = Formula::not(Formula::next(Formula::not(f)));
        prop_assert_eq!(evaluate(&wx, &t), evaluate(&dual, &t));
    }

    #[test]
    fn past_duals(f in arb_formula(true), t in arb_trace()) {
        prop_assume!(!t.is_empty());
        let h = Formula::historically(f.clone());
        let dual = Formula::not(Formula::once(Formula::not(f)));
        prop_assert_eq!(evaluate_as(&h, &t, Dialect::Pltlf), evaluate_as(&dual, &t, Dialect::Pltlf));
    }

    #[test]
    fn lifting_round_trips(x in "[a-z][0-9]", y in "[a-z][0-9]") {
        prop_assume!(x != y);
        let f = Formula::until(
            Formula::Atom(Atom::new("at", &[&x])),
            Formula::Atom(Atom::new("on", &[&x, &y])),
        );
        let d = to_dfa(&f, &AutomatonOptions::default()).unwrap();
        let p = lift(&d, &[x.clone(), y.clone()]).unwrap();
        prop_assert_eq!(p.variables(), vec!["x", "y"]);
        prop_assert!(p.instantiate().is_isomorphic(&d));
        prop_assert_eq!(p.instantiate(), d);
    }
}

#[test]
fn depth_two_corpus_is_exhaustive_in_size() {
    assert!(common::corpus(false, 2).len() > 2000);
    assert!(common::corpus(true, 2).len() > 1000);
}
