//! Executions of a policy and the per-action average distance table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::compile::AugmentedProblem;
use crate::fond::{ActionLabel, GroundCondition, GroundedFond, State};
use crate::logic::{Atom, Trace};
use crate::planner::Policy;

/// Distance used for actions that never occur in a goal's executions.
pub fn default_distance() -> f64 {
    5f64.exp()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecutionError {
    #[error("more than {cap} executions")]
    Cap { cap: usize },
    #[error("policy has no action for a reachable non-goal state")]
    Unmapped,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// How many times a path may re-enter a state it already visited.
    pub loop_bound: usize,
    pub max_executions: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            loop_bound: 1,
            max_executions: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    /// Domain actions only.
    pub actions: Vec<ActionLabel>,
    /// Initial state followed by the state after each domain action.
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExecutionSet {
    pub executions: Vec<Execution>,
}

impl ExecutionSet {
    pub fn len(&self) -> usize {
        self.executions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.executions.is_empty()
    }

    /// Whether `a` occurs somewhere before `b` in at least one execution.
    pub fn has_order(&self, a: &ActionLabel, b: &ActionLabel) -> bool {
        self.executions.iter().any(|e| {
            e.actions
                .iter()
                .position(|x| x == a)
                .is_some_and(|i| e.actions[i + 1..].contains(b))
        })
    }
}

/// Depth-first enumeration of goal-reaching paths under `policy`. Paths that
/// differ only in the outcome of their last action coincide once actions are
/// listed, so executions are kept unique by their action sequence.
pub fn enumerate_policy(
    m: &GroundedFond,
    goal: &GroundCondition,
    policy: &Policy,
    is_sync: &dyn Fn(usize) -> bool,
    base_fluents: usize,
    opts: &EnumerationOptions,
) -> Result<ExecutionSet, ExecutionError> {
    struct Walk<'a> {
        m: &'a GroundedFond,
        goal: &'a GroundCondition,
        policy: &'a Policy,
        opts: &'a EnumerationOptions,
        visits: HashMap<State, usize>,
        path_actions: Vec<usize>,
        path_states: Vec<State>,
        raw: Vec<(Vec<usize>, Vec<State>)>,
    }

    impl Walk<'_> {
        fn go(&mut self, s: State) -> Result<(), ExecutionError> {
            let count = self.visits.entry(s.clone()).or_insert(0);
            if *count > self.opts.loop_bound {
                return Ok(());
            }
            *count += 1;
            self.path_states.push(s.clone());
            if self.goal.holds(&s) {
                self.raw.push((self.path_actions.clone(), self.path_states.clone()));
                if self.raw.len() > self.opts.max_executions {
                    return Err(ExecutionError::Cap {
                        cap: self.opts.max_executions,
                    });
                }
            } else {
                let a = self.policy.action(&s).ok_or(ExecutionError::Unmapped)?;
                self.path_actions.push(a);
                for n in self.m.successors_unchecked(&s, a) {
                    self.go(n)?;
                }
                self.path_actions.pop();
            }
            self.path_states.pop();
            *self.visits.get_mut(&s).unwrap() -= 1;
            Ok(())
        }
    }

    let mut w = Walk {
        m,
        goal,
        policy,
        opts,
        visits: HashMap::new(),
        path_actions: vec![],
        path_states: vec![],
        raw: vec![],
    };
    w.go(m.initial.clone())?;

    let atoms = |s: &State| -> BTreeSet<Atom> {
        s.iter()
            .take_while(|&i| i < base_fluents)
            .map(|i| m.fluents[i].clone())
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (acts, states) in w.raw {
        let mut actions = Vec::new();
        let mut steps = vec![atoms(&states[0])];
        for (k, &a) in acts.iter().enumerate() {
            if !is_sync(a) {
                actions.push(m.actions[a].label.clone());
                steps.push(atoms(&states[k + 1]));
            }
        }
        if seen.insert(actions.clone()) {
            out.push(Execution {
                actions,
                trace: Trace::new(steps),
            });
        }
    }
    Ok(ExecutionSet { executions: out })
}

/// Executions of a policy for a compiled goal, with trans actions stripped.
pub fn enumerate_executions(
    problem: &AugmentedProblem,
    policy: &Policy,
    opts: &EnumerationOptions,
) -> Result<ExecutionSet, ExecutionError> {
    let goal = problem
        .model
        .goal
        .as_ref()
        .expect("compiled problems always carry a goal");
    enumerate_policy(
        &problem.model,
        goal,
        policy,
        &|a| problem.is_trans(a),
        problem.base_fluents,
        opts,
    )
}

/// Average number of remaining actions after each occurrence of an action.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DistanceTable {
    sums: BTreeMap<ActionLabel, (f64, usize)>,
}

impl DistanceTable {
    /// d(a), or e^5 if `a` never occurs.
    pub fn d(&self, a: &ActionLabel) -> f64 {
        self.get(a).unwrap_or_else(default_distance)
    }

    pub fn get(&self, a: &ActionLabel) -> Option<f64> {
        self.sums.get(a).map(|&(s, n)| s / n as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActionLabel, f64)> {
        self.sums.iter().map(|(a, &(s, n))| (a, s / n as f64))
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }
}

pub fn average_distances(e: &ExecutionSet) -> DistanceTable {
    let mut sums: BTreeMap<ActionLabel, (f64, usize)> = BTreeMap::new();
    for ex in &e.executions {
        let n = ex.actions.len();
        for (i, a) in ex.actions.iter().enumerate() {
            let entry = sums.entry(a.clone()).or_insert((0.0, 0));
            entry.0 += (n - 1 - i) as f64;
            entry.1 += 1;
        }
    }
    DistanceTable { sums }
}

/// All pairs `(a_i, a_j)` with `i < j`.
pub fn order_relations(e: &[ActionLabel]) -> BTreeSet<(ActionLabel, ActionLabel)> {
    let mut out = BTreeSet::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            out.insert((e[i].clone(), e[j].clone()));
        }
    }
    out
}
