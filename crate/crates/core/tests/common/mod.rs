#![allow(dead_code)]

use std::collections::BTreeSet;

use fondgr::logic::{Atom, Formula, Trace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn atom(name: &str) -> Formula {
    Formula::Atom(Atom::prop(name))
}

pub fn future_ops(f: Formula) -> Vec<Formula> {
    vec![
        Formula::not(f.clone()),
        Formula::next(f.clone()),
        Formula::weak_next(f.clone()),
        Formula::eventually(f.clone()),
        Formula::always(f),
    ]
}

pub fn past_ops(f: Formula) -> Vec<Formula> {
    vec![
        Formula::not(f.clone()),
        Formula::yesterday(f.clone()),
        Formula::once(f.clone()),
        Formula::historically(f),
    ]
}

pub fn future_bin(l: Formula, r: Formula) -> Vec<Formula> {
    vec![
        Formula::and(l.clone(), r.clone()),
        Formula::or(l.clone(), r.clone()),
        Formula::until(l.clone(), r.clone()),
        Formula::release(l, r),
    ]
}

pub fn past_bin(l: Formula, r: Formula) -> Vec<Formula> {
    vec![
        Formula::and(l.clone(), r.clone()),
        Formula::or(l.clone(), r.clone()),
        Formula::since(l, r),
    ]
}

/// Every formula over atoms `a`, `b` with operator depth at most `depth`.
pub fn corpus(past: bool, depth: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![vec![atom("a"), atom("b")]];
    for d in 1..=depth {
        let below: Vec<Formula> = levels.iter().flatten().cloned().collect();
        let top = &levels[d - 1];
        let mut next = Vec::new();
        for f in top {
            next.extend(if past { past_ops(f.clone()) } else { future_ops(f.clone()) });
        }
        for l in &below {
            for r in &below {
                if l.depth() == d - 1 || r.depth() == d - 1 {
                    next.extend(if past {
                        past_bin(l.clone(), r.clone())
                    } else {
                        future_bin(l.clone(), r.clone())
                    });
                }
            }
        }
        levels.push(next);
    }
    let mut seen = BTreeSet::new();
    levels
        .into_iter()
        .flatten()
        .filter(|f| seen.insert(f.clone()))
        .collect()
}

/// A random formula of depth exactly `depth` over `a`, `b`.
pub fn random_formula(rng: &mut impl Rng, past: bool, depth: usize) -> Formula {
    if depth == 0 {
        return atom(["a", "b"].choose(rng).unwrap());
    }
    if rng.gen_bool(0.5) {
        let inner = random_formula(rng, past, depth - 1);
        let ops = if past { past_ops(inner) } else { future_ops(inner) };
        ops.choose(rng).unwrap().clone()
    } else {
        let l = random_formula(rng, past, depth - 1);
        let rd = rng.gen_range(0..depth);
        let r = random_formula(rng, past, rd);
        let (l, r) = if rng.gen_bool(0.5) { (l, r) } else { (r, l) };
        let ops = if past { past_bin(l, r) } else { future_bin(l, r) };
        ops.choose(rng).unwrap().clone()
    }
}

/// All traces over `atoms` of length at most `max_len`.
pub fn all_traces(atoms: &[&str], max_len: usize) -> Vec<Trace> {
    let letters: Vec<BTreeSet<Atom>> = (0..1usize << atoms.len())
        .map(|m| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, a)| Atom::prop(*a))
                .collect()
        })
        .collect();
    let mut out = vec![Trace::default()];
    let mut frontier = vec![Trace::default()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &frontier {
            for l in &letters {
                let mut steps = t.steps.clone();
                steps.push(l.clone());
                next.push(Trace::new(steps));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn arb_formula(past: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(atom("a")),
        Just(atom("b")),
        Just(atom("c")),
        Just(Formula::True),
        Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        if past {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::yesterday),
                inner.clone().prop_map(Formula::once),
                inner.clone().prop_map(Formula::historically),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::since(l, r)),
            ]
            .boxed()
        } else {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::next),
                inner.clone().prop_map(Formula::weak_next),
                inner.clone().prop_map(Formula::eventually),
                inner.clone().prop_map(Formula::always),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::until(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::release(l, r)),
            ]
            .boxed()
        }
    })
}

pub fn arb_trace() -> impl Strategy<Value = Trace> {
    prop::collection::vec(prop::collection::btree_set(prop_oneof![Just("a"), Just("b"), Just("c")], 0..=3), 0..6)
        .prop_map(|steps| {
            Trace::new(
                steps
                    .into_iter()
                    .map(|s| s.into_iter().map(Atom::prop).collect())
                    .collect(),
            )
        })
}
