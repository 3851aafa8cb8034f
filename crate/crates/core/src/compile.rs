//! Product of a FOND task with the automaton of a temporal goal.
//!
//! The product adds one fluent per automaton state plus `turnDomain`. Domain
//! actions require `turnDomain` and clear it; a single `trans` action reads the
//! current domain state, moves the automaton, and sets `turnDomain` again.
//! The product starts with `turnDomain` false so that the first `trans` reads
//! the initial state, which makes it letter 0 of the trace.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::automata::{self, AutomatonError, AutomatonOptions, Dfa, GuardLiteral, StateId};
use crate::fond::{
    self, ActionLabel, AtomSchema, ConditionalEffect, Condition, Domain, Effect, GroundAction,
    GroundCondition, GroundedFond, Outcome, PddlError, PredicateSchema, ProblemGoal,
    ProblemInstance, State, Term, TypedName,
};
use crate::logic::{Atom, Formula};

pub const TURN_PREDICATE: &str = "turnDomain";
pub const TRANS_ACTION: &str = "trans";

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error("goal atom {0} is not a ground atom of the instance")]
    UnknownAtom(String),
    #[error("malformed execution: {0}")]
    Alternation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmitMode {
    #[default]
    Grounded,
    Parametric,
}

/// The augmented task Γ′ for one goal, explicit and ready to solve.
#[derive(Debug, Clone)]
pub struct AugmentedProblem {
    pub formula: Formula,
    pub automaton: Dfa,
    /// Product model; fluents `0..base_fluents` are the original ones.
    pub model: GroundedFond,
    pub base_fluents: usize,
    /// Fluent index of each automaton state.
    pub q_fluents: Vec<usize>,
    pub turn: usize,
    pub trans: usize,
    domain: Domain,
    problem: ProblemInstance,
}

pub fn compile_goal(
    d: &Domain,
    p: &ProblemInstance,
    phi: &Formula,
) -> Result<AugmentedProblem, CompileError> {
    let base = fond::ground(d, p)?;
    compile_with_base(&base, d, p, phi, &AutomatonOptions::default())
}

/// Like [`compile_goal`] but reuses an already grounded base model.
pub fn compile_with_base(
    base: &GroundedFond,
    d: &Domain,
    p: &ProblemInstance,
    phi: &Formula,
    opts: &AutomatonOptions,
) -> Result<AugmentedProblem, CompileError> {
    let automaton = automata::to_dfa(phi, opts)?;
    let n = base.num_fluents();
    // each automaton atom is a base fluent, or constantly false
    let atom_fluent: Vec<Option<usize>> = automaton
        .atoms()
        .iter()
        .map(|a| match base.fluent(a) {
            Some(i) => Ok(Some(i)),
            None if is_ground_atom_of(d, p, a) => Ok(None),
            None => Err(CompileError::UnknownAtom(a.to_string())),
        })
        .collect::<Result<_, _>>()?;

    let k = automaton.num_states();
    let q_fluents: Vec<usize> = (n..n + k).collect();
    let turn = n + k;
    let total = turn + 1;
    let mut fluents = base.fluents.clone();
    fluents.extend((0..k).map(|q| Atom::prop(format!("q{q}"))));
    fluents.push(Atom::prop(TURN_PREDICATE));

    let mut actions: Vec<GroundAction> = base
        .actions
        .iter()
        .map(|a| GroundAction {
            label: a.label.clone(),
            precondition: GroundCondition::And(vec![
                GroundCondition::Fluent(turn),
                a.precondition.clone(),
            ]),
            outcomes: a
                .outcomes
                .iter()
                .map(|o| {
                    let mut o = o.clone();
                    o.effects.push(ConditionalEffect {
                        condition: GroundCondition::True,
                        add: vec![],
                        del: vec![turn],
                    });
                    o
                })
                .collect(),
        })
        .collect();

    let mut effects = vec![ConditionalEffect {
        condition: GroundCondition::True,
        add: vec![turn],
        del: vec![],
    }];
    for q in 0..k {
        for t in automaton.transitions(q) {
            let others: Vec<usize> = (0..k)
                .filter(|&r| r != t.target && r != q)
                .map(|r| q_fluents[r])
                .collect();
            for cube in &t.cubes {
                let Some(cond) = ground_cube(cube, &atom_fluent) else {
                    continue;
                };
                let mut del = others.clone();
                if t.target != q {
                    del.push(q_fluents[q]);
                }
                let mut parts = vec![GroundCondition::Fluent(q_fluents[q])];
                parts.extend(cond);
                effects.push(ConditionalEffect {
                    condition: GroundCondition::And(parts),
                    add: vec![q_fluents[t.target]],
                    del,
                });
            }
        }
    }
    let trans = actions.len();
    actions.push(GroundAction {
        label: ActionLabel {
            name: TRANS_ACTION.into(),
            args: vec![],
        },
        precondition: GroundCondition::Not(Box::new(GroundCondition::Fluent(turn))),
        outcomes: vec![Outcome { effects }],
    });

    let mut initial = State::from_indices(total, base.initial.iter());
    initial.insert(q_fluents[automaton.initial()]);
    let goal = GroundCondition::And(vec![
        GroundCondition::Fluent(turn),
        GroundCondition::Or(
            automaton
                .accepting_states()
                .into_iter()
                .map(|q| GroundCondition::Fluent(q_fluents[q]))
                .collect(),
        ),
    ]);
    let model = GroundedFond::new(fluents, actions, initial, Some(goal), base.objects.clone());
    Ok(AugmentedProblem {
        formula: phi.clone(),
        automaton,
        model,
        base_fluents: n,
        q_fluents,
        turn,
        trans,
        domain: d.clone(),
        problem: p.clone(),
    })
}

/// Literals of a guard cube over base fluents; `None` if the cube needs a
/// constantly false atom to hold.
fn ground_cube(cube: &[GuardLiteral], atom_fluent: &[Option<usize>]) -> Option<Vec<GroundCondition>> {
    let mut out = Vec::new();
    for &(i, pos) in cube {
        match (atom_fluent[i], pos) {
            (Some(f), true) => out.push(GroundCondition::Fluent(f)),
            (Some(f), false) => out.push(GroundCondition::Not(Box::new(GroundCondition::Fluent(f)))),
            (None, true) => return None,
            (None, false) => {}
        }
    }
    Some(out)
}

fn is_ground_atom_of(d: &Domain, p: &ProblemInstance, a: &Atom) -> bool {
    let declared = d
        .predicates
        .iter()
        .any(|s| s.name == a.predicate && s.params.len() == a.args.len());
    let known = |o: &String| {
        d.constants.iter().any(|c| &c.name == o) || p.objects.iter().any(|c| &c.name == o)
    };
    declared && a.args.iter().all(known)
}

impl AugmentedProblem {
    pub fn is_trans(&self, action: usize) -> bool {
        action == self.trans
    }

    /// The automaton state recorded in `s`, if exactly one q-fluent holds.
    pub fn automaton_state(&self, s: &State) -> Option<StateId> {
        let mut found = None;
        for (q, &f) in self.q_fluents.iter().enumerate() {
            if s.contains(f) {
                if found.is_some() {
                    return None;
                }
                found = Some(q);
            }
        }
        found
    }

    /// Drops the bookkeeping fluents.
    pub fn base_state(&self, s: &State) -> State {
        s.project(self.base_fluents)
    }

    pub fn base_atoms(&self, s: &State) -> BTreeSet<Atom> {
        s.iter()
            .take_while(|&i| i < self.base_fluents)
            .map(|i| self.model.fluents[i].clone())
            .collect()
    }

    /// Removes trans occurrences from a sequence of product action indices.
    pub fn strip_sync(&self, actions: &[usize]) -> Result<Vec<usize>, CompileError> {
        check_alternation(actions.iter().map(|&a| self.is_trans(a)))?;
        Ok(actions.iter().copied().filter(|&a| !self.is_trans(a)).collect())
    }

    /// Emits the product as PDDL domain and problem text.
    pub fn emit_pddl(&self, mode: EmitMode) -> (String, String) {
        let (d, p) = match mode {
            EmitMode::Grounded => self.emit_grounded(),
            EmitMode::Parametric => self.emit_parametric(),
        };
        (d.to_string(), p.to_string())
    }

    fn augmented_base(&self) -> Domain {
        let mut d = self.domain.clone();
        for r in [":conditional-effects", ":negative-preconditions", ":disjunctive-preconditions"] {
            if !d.requirements.iter().any(|x| x == r) {
                d.requirements.push(r.to_string());
            }
        }
        let turn_atom = || AtomSchema {
            predicate: TURN_PREDICATE.into(),
            args: vec![],
        };
        for a in &mut d.actions {
            a.precondition = Condition::And(vec![Condition::Atom(turn_atom()), a.precondition.clone()]);
            a.effect = Effect::And(vec![a.effect.clone(), Effect::Del(turn_atom())]);
        }
        d.predicates.push(PredicateSchema {
            name: TURN_PREDICATE.into(),
            params: vec![],
        });
        d
    }

    fn emit_grounded(&self) -> (Domain, ProblemInstance) {
        let mut d = self.augmented_base();
        let k = self.automaton.num_states();
        for q in 0..k {
            d.predicates.push(PredicateSchema {
                name: format!("q{q}"),
                params: vec![],
            });
        }
        let q_atom = |q: usize| AtomSchema {
            predicate: format!("q{q}"),
            args: vec![],
        };
        let consts = |a: &Atom| AtomSchema {
            predicate: a.predicate.clone(),
            args: a.args.iter().cloned().map(Term::Const).collect(),
        };
        let atoms: Vec<AtomSchema> = self.automaton.atoms().iter().map(consts).collect();
        d.actions.push(self.trans_schema(vec![], &q_atom, &atoms));

        // objects named in guards become domain constants
        let interest: BTreeSet<&String> = self.automaton.atoms().iter().flat_map(|a| &a.args).collect();
        let mut p = self.problem.clone();
        for o in p.objects.iter().filter(|o| interest.contains(&o.name)) {
            if !d.constants.iter().any(|c| c.name == o.name) {
                d.constants.push(o.clone());
            }
        }
        p.objects.retain(|o| !interest.contains(&o.name));
        p.init.insert(Atom::prop(format!("q{}", self.automaton.initial())));
        p.goal = Some(ProblemGoal::Classical(self.goal_condition(&|q| q_atom(q))));
        (d, p)
    }

    fn emit_parametric(&self) -> (Domain, ProblemInstance) {
        let mut objects: Vec<String> = Vec::new();
        for a in self.formula.atoms_in_order() {
            for o in a.args {
                if !objects.contains(&o) {
                    objects.push(o);
                }
            }
        }
        let pdfa = automata::lift(&self.automaton, &objects)
            .expect("objects are taken from the automaton atoms");
        let vars: Vec<String> = pdfa.variables().iter().map(|v| v.to_string()).collect();
        let params: Vec<TypedName> = vars
            .iter()
            .map(|v| TypedName {
                name: v.clone(),
                ty: "object".into(),
            })
            .collect();
        let mut d = self.augmented_base();
        let k = pdfa.automaton.num_states();
        for q in 0..k {
            d.predicates.push(PredicateSchema {
                name: format!("q{q}"),
                params: params.clone(),
            });
        }
        let q_atom = |q: usize| AtomSchema {
            predicate: format!("q{q}"),
            args: vars.iter().cloned().map(Term::Var).collect(),
        };
        let atoms: Vec<AtomSchema> = pdfa
            .automaton
            .atoms()
            .iter()
            .map(|a| AtomSchema {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|x| {
                        if vars.contains(x) {
                            Term::Var(x.clone())
                        } else {
                            Term::Const(x.clone())
                        }
                    })
                    .collect(),
            })
            .collect();
        let mut trans = self.trans_schema(params, &q_atom, &atoms);
        trans.precondition = Condition::And(vec![
            trans.precondition,
            Condition::Or((0..k).map(|q| Condition::Atom(q_atom(q))).collect()),
        ]);
        d.actions.push(trans);

        let mut p = self.problem.clone();
        let ground_q = |q: usize| AtomSchema {
            predicate: format!("q{q}"),
            args: objects.iter().cloned().map(Term::Const).collect(),
        };
        p.init.insert(Atom {
            predicate: format!("q{}", self.automaton.initial()),
            args: objects.clone(),
        });
        p.goal = Some(ProblemGoal::Classical(self.goal_condition(&ground_q)));
        (d, p)
    }

    fn trans_schema(
        &self,
        params: Vec<TypedName>,
        q_atom: &dyn Fn(usize) -> AtomSchema,
        atoms: &[AtomSchema],
    ) -> fond::ActionSchema {
        let turn = AtomSchema {
            predicate: TURN_PREDICATE.into(),
            args: vec![],
        };
        let k = self.automaton.num_states();
        let mut effects = vec![Effect::Add(turn.clone())];
        for q in 0..k {
            for t in self.automaton.transitions(q) {
                let mut body = vec![Effect::Add(q_atom(t.target))];
                body.extend(
                    (0..k)
                        .filter(|&r| r != t.target)
                        .map(|r| Effect::Del(q_atom(r))),
                );
                for cube in &t.cubes {
                    let mut cond = vec![Condition::Atom(q_atom(q))];
                    cond.extend(cube.iter().map(|&(i, pos)| {
                        let a = Condition::Atom(atoms[i].clone());
                        if pos {
                            a
                        } else {
                            Condition::Not(Box::new(a))
                        }
                    }));
                    effects.push(Effect::When(Condition::And(cond), Box::new(Effect::And(body.clone()))));
                }
            }
        }
        fond::ActionSchema {
            name: TRANS_ACTION.into(),
            params,
            precondition: Condition::Not(Box::new(Condition::Atom(turn))),
            effect: Effect::And(effects),
        }
    }

    fn goal_condition(&self, q_atom: &dyn Fn(usize) -> AtomSchema) -> Condition {
        Condition::And(vec![
            Condition::Atom(AtomSchema {
                predicate: TURN_PREDICATE.into(),
                args: vec![],
            }),
            Condition::Or(
                self.automaton
                    .accepting_states()
                    .into_iter()
                    .map(|q| Condition::Atom(q_atom(q)))
                    .collect(),
            ),
        ])
    }

    /// Parses and grounds the emitted text again and checks that the result
    /// has the same reachable behaviour as [`AugmentedProblem::model`].
    pub fn check_round_trip(&self, mode: EmitMode, cap: usize) -> Result<bool, CompileError> {
        let (dt, pt) = self.emit_pddl(mode);
        let d = fond::parse_domain(&dt)?;
        let p = fond::parse_problem(&pt, &d)?;
        let other = fond::ground(&d, &p)?;
        Ok(equivalent_models(&self.model, &other, cap))
    }
}

/// `<task>__<goal-id>__{domain,problem}.pddl`
pub fn file_names(task: &str, goal_id: &str) -> (String, String) {
    (
        format!("{task}__{goal_id}__domain.pddl"),
        format!("{task}__{goal_id}__problem.pddl"),
    )
}

fn check_alternation(is_trans: impl Iterator<Item = bool>) -> Result<(), CompileError> {
    let mut prev: Option<bool> = None;
    for (i, t) in is_trans.enumerate() {
        if prev == Some(t) {
            let what = if t { "trans actions" } else { "domain actions" };
            return Err(CompileError::Alternation(format!(
                "two consecutive {what} at position {i}"
            )));
        }
        prev = Some(t);
    }
    Ok(())
}

/// Removes trans actions from an execution given by labels.
pub fn strip_sync(execution: &[ActionLabel]) -> Result<Vec<ActionLabel>, CompileError> {
    let is_trans = |a: &ActionLabel| a.name == TRANS_ACTION;
    check_alternation(execution.iter().map(is_trans))?;
    Ok(execution.iter().filter(|a| !is_trans(a)).cloned().collect())
}

// The parametric encoding names automaton fluents (q0 11) and trans actions
// (trans 11); both compare equal to their 0-ary grounded counterparts.
fn normalize_atom(a: &Atom) -> Atom {
    let is_q = a.predicate.len() > 1
        && a.predicate.starts_with('q')
        && a.predicate[1..].bytes().all(|b| b.is_ascii_digit());
    if is_q {
        Atom::prop(a.predicate.clone())
    } else {
        a.clone()
    }
}

fn normalize_label(l: &ActionLabel) -> ActionLabel {
    if l.name == TRANS_ACTION {
        ActionLabel {
            name: l.name.clone(),
            args: vec![],
        }
    } else {
        l.clone()
    }
}

type Node = BTreeSet<Atom>;

fn behaviour(m: &GroundedFond, s: &State) -> (bool, Vec<(ActionLabel, BTreeSet<Node>)>) {
    let names = |s: &State| -> Node { s.iter().map(|i| normalize_atom(&m.fluents[i])).collect() };
    let goal = m.goal.as_ref().is_some_and(|g| g.holds(s));
    let mut edges: Vec<(ActionLabel, BTreeSet<Node>)> = m
        .applicable(s)
        .into_iter()
        .map(|a| {
            (
                normalize_label(&m.actions[a].label),
                m.successors_unchecked(s, a).iter().map(names).collect(),
            )
        })
        .collect();
    edges.sort();
    (goal, edges)
}

/// Compares the reachable graphs of two models, matching states by the
/// names of their true fluents. Explores at most `cap` states.
pub fn equivalent_models(a: &GroundedFond, b: &GroundedFond, cap: usize) -> bool {
    let names_a = |s: &State| -> Node { s.iter().map(|i| normalize_atom(&a.fluents[i])).collect() };
    let names_b = |s: &State| -> Node { s.iter().map(|i| normalize_atom(&b.fluents[i])).collect() };
    if names_a(&a.initial) != names_b(&b.initial) {
        return false;
    }
    let mut seen: HashMap<Node, ()> = HashMap::new();
    let mut queue = VecDeque::from([(a.initial.clone(), b.initial.clone())]);
    seen.insert(names_a(&a.initial), ());
    while let Some((sa, sb)) = queue.pop_front() {
        if seen.len() > cap {
            break;
        }
        let (ga, ea) = behaviour(a, &sa);
        let (gb, eb) = behaviour(b, &sb);
        if ga != gb || ea != eb {
            return false;
        }
        for act in a.applicable(&sa) {
            let la = normalize_label(&a.actions[act].label);
            let Some(bi) = b
                .applicable(&sb)
                .into_iter()
                .find(|&x| normalize_label(&b.actions[x].label) == la)
            else {
                return false;
            };
            let succ_b = b.successors_unchecked(&sb, bi);
            for na in a.successors_unchecked(&sa, act) {
                let key = names_a(&na);
                if seen.contains_key(&key) {
                    continue;
                }
                let Some(nb) = succ_b.iter().find(|x| names_b(x) == key) else {
                    return false;
                };
                seen.insert(key, ());
                queue.push_back((na, nb.clone()));
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::logic::{evaluate, parse_formula};

    fn tireworld() -> (Domain, ProblemInstance) {
        let d = fond::parse_domain(data::TIREWORLD_DOMAIN).unwrap();
        let p = fond::parse_problem(data::TIREWORLD_GRID, &d).unwrap();
        (d, p)
    }

    fn label(s: &str) -> ActionLabel {
        s.parse().unwrap()
    }

    #[test]
    fn eventually_adds_two_states_and_turn() {
        let (d, p) = tireworld();
        let base = fond::ground(&d, &p).unwrap();
        let aug = compile_goal(&d, &p, &parse_formula("F vAt_22").unwrap()).unwrap();
        assert_eq!(aug.model.num_fluents(), base.num_fluents() + 2 + 1);
        assert_eq!(aug.model.actions.len(), base.actions.len() + 1);
    }

    #[test]
    fn true_is_reached_by_one_trans() {
        let (d, p) = tireworld();
        let aug = compile_goal(&d, &p, &Formula::True).unwrap();
        let m = &aug.model;
        assert!(!m.goal.as_ref().unwrap().holds(&m.initial));
        assert_eq!(m.applicable(&m.initial), vec![aug.trans]);
        let next = m.successors(&m.initial, aug.trans).unwrap();
        assert_eq!(next.len(), 1);
        assert!(m.goal.as_ref().unwrap().holds(&next[0]));
    }

    #[test]
    fn base_actions_need_turn_domain() {
        let (d, p) = tireworld();
        let aug = compile_goal(&d, &p, &parse_formula("F vAt_22").unwrap()).unwrap();
        let mv = aug.model.action(&label("(move 11 21)")).unwrap();
        assert!(!aug.model.is_applicable(&aug.model.initial, mv));
        let after = aug.model.successors(&aug.model.initial, aug.trans).unwrap()[0].clone();
        assert!(aug.model.is_applicable(&after, mv));
        for s in aug.model.successors(&after, mv).unwrap() {
            assert!(!s.contains(aug.turn));
        }
    }

    #[test]
    fn trans_tracks_the_automaton() {
        let (d, p) = tireworld();
        let phi = parse_formula("F vAt_21").unwrap();
        let aug = compile_goal(&d, &p, &phi).unwrap();
        let m = &aug.model;
        let s1 = m.successors(&m.initial, aug.trans).unwrap()[0].clone();
        assert_eq!(aug.automaton_state(&s1), Some(aug.automaton.initial()));
        let mv = m.action(&label("(move 11 21)")).unwrap();
        let s2 = m.successors(&s1, mv).unwrap()[0].clone();
        let s3 = m.successors(&s2, aug.trans).unwrap()[0].clone();
        let q = aug.automaton_state(&s3).unwrap();
        assert!(aug.automaton.is_accepting(q));
        assert!(m.goal.as_ref().unwrap().holds(&s3));
        let trace = crate::logic::Trace::new(vec![aug.base_atoms(&s1), aug.base_atoms(&s3)]);
        assert!(evaluate(&phi, &trace));
    }

    #[test]
    fn unknown_goal_atom_is_an_error() {
        let (d, p) = tireworld();
        let err = compile_goal(&d, &p, &parse_formula("F vAt_99").unwrap()).unwrap_err();
        assert!(matches!(err, CompileError::UnknownAtom(_)));
        // well-typed but never true: accepted
        assert!(compile_goal(&d, &p, &parse_formula("F (road 51 11)").unwrap()).is_ok());
    }

    #[test]
    fn strip_sync_examples() {
        let a1 = label("(move 11 21)");
        let a2 = label("(move 21 22)");
        let t = label("(trans)");
        assert_eq!(
            strip_sync(&[a1.clone(), t.clone(), a2.clone(), t.clone()]).unwrap(),
            vec![a1.clone(), a2.clone()]
        );
        assert!(strip_sync(&[]).unwrap().is_empty());
        assert!(strip_sync(std::slice::from_ref(&t)).unwrap().is_empty());
        assert_eq!(
            strip_sync(&[t.clone(), a1.clone(), t.clone()]).unwrap(),
            vec![a1.clone()]
        );
        assert!(strip_sync(&[a1.clone(), a2.clone()]).is_err());
        assert!(strip_sync(&[t.clone(), t]).is_err());
    }

    #[test]
    fn grounded_emission_round_trips() {
        let (d, p) = tireworld();
        for g in ["F vAt_22", "vAt_11 U vAt_21", "F (vAt_21 & X F vAt_22)", "vAt_22 & O vAt_21"] {
            let aug = compile_goal(&d, &p, &parse_formula(g).unwrap()).unwrap();
            assert!(aug.check_round_trip(EmitMode::Grounded, 100_000).unwrap(), "{g}");
        }
    }

    #[test]
    fn parametric_emission_round_trips() {
        let (d, p) = tireworld();
        let aug = compile_goal(&d, &p, &parse_formula("F vAt_21").unwrap()).unwrap();
        let (dt, pt) = aug.emit_pddl(EmitMode::Parametric);
        assert!(dt.contains("(q0 ?x - object)"));
        assert!(dt.contains("(q1 ?x - object)"));
        assert!(pt.contains("(q0 21)"));
        assert!(aug.check_round_trip(EmitMode::Parametric, 100_000).unwrap());
    }

    #[test]
    fn problem_goal_lists_accepting_fluents_and_turn() {
        let (d, p) = tireworld();
        let aug = compile_goal(&d, &p, &parse_formula("F vAt_22").unwrap()).unwrap();
        let (_, pt) = aug.emit_pddl(EmitMode::Grounded);
        let acc = aug.automaton.accepting_states();
        let goal_line = pt.lines().find(|l| l.contains(":goal")).unwrap();
        assert!(goal_line.contains("(turnDomain)"));
        for q in acc {
            assert!(goal_line.contains(&format!("(q{q})")));
        }
    }

    #[test]
    fn file_names_follow_the_pattern() {
        assert_eq!(
            file_names("tire", "phi0"),
            ("tire__phi0__domain.pddl".into(), "tire__phi0__problem.pddl".into())
        );
    }
}
