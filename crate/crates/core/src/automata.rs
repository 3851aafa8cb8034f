//! Translation of LTLf/PLTLf formulas into minimal DFAs, and the lifted
//! (parametric) form used when encoding automata into PDDL.
//!
//! Automata read one valuation of the formula's atoms per step. Internally a
//! letter is a bitmask over [`Dfa::atoms`]; guards are only built when
//! transitions are listed or exported, so the valuation space of the whole
//! planning domain is never enumerated.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::logic::{to_nnf, Atom, Dialect, Formula, MixedDialect, Trace};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton construction exceeded the cap of {cap} states")]
    TooManyStates { cap: usize },
    #[error("formula has {count} distinct atoms, more than the supported {cap}")]
    TooManyAtoms { count: usize, cap: usize },
    #[error("formula has more than {cap} subformulas")]
    TooManySubformulas { cap: usize },
    #[error("expected a {expected} formula")]
    DialectMismatch { expected: Dialect },
    #[error(transparent)]
    MixedDialect(#[from] MixedDialect),
    #[error("object `{0}` does not occur in any automaton atom")]
    UnknownObject(String),
}

#[derive(Debug, Clone, Copy)]
pub struct AutomatonOptions {
    pub max_states: usize,
    pub max_atoms: usize,
}

impl Default for AutomatonOptions {
    fn default() -> Self {
        AutomatonOptions {
            max_states: 100_000,
            max_atoms: 16,
        }
    }
}

/// A literal over the automaton's atom list: `(atom index, polarity)`.
pub type GuardLiteral = (usize, bool);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    /// Disjoint cubes whose union is the guard.
    pub cubes: Vec<Vec<GuardLiteral>>,
    pub target: StateId,
}

impl Transition {
    pub fn guard(&self, atoms: &[Atom]) -> Formula {
        cubes_to_formula(&self.cubes, atoms)
    }
}

pub fn cubes_to_formula(cubes: &[Vec<GuardLiteral>], atoms: &[Atom]) -> Formula {
    let lit = |&(i, pos): &GuardLiteral| {
        let a = Formula::Atom(atoms[i].clone());
        if pos {
            a
        } else {
            Formula::not(a)
        }
    };
    let cube = |c: &Vec<GuardLiteral>| {
        c.iter()
            .map(lit)
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    };
    cubes
        .iter()
        .map(cube)
        .reduce(Formula::or)
        .unwrap_or(Formula::False)
}

/// Deterministic, complete automaton over valuations of `atoms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    atoms: Vec<Atom>,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<Vec<StateId>>,
}

impl Dfa {
    /// Builds a DFA from an explicit table; `delta[q][letter]` must be total.
    pub fn from_table(
        atoms: Vec<Atom>,
        initial: StateId,
        accepting: Vec<bool>,
        delta: Vec<Vec<StateId>>,
    ) -> Self {
        let letters = 1usize << atoms.len();
        assert!(delta.iter().all(|row| row.len() == letters));
        assert_eq!(accepting.len(), delta.len());
        assert!(initial < delta.len());
        Dfa {
            atoms,
            initial,
            accepting,
            delta,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
    pub fn initial(&self) -> StateId {
        self.initial
    }
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }
    pub fn num_letters(&self) -> usize {
        1 << self.atoms.len()
    }
    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }
    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }
    pub fn step(&self, q: StateId, letter: usize) -> StateId {
        self.delta[q][letter]
    }

    /// Letter for a valuation given as a membership test on atoms.
    pub fn letter_of(&self, holds: impl Fn(&Atom) -> bool) -> usize {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| holds(a))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn run(&self, t: &Trace) -> StateId {
        t.steps.iter().fold(self.initial, |q, s| {
            self.step(q, self.letter_of(|a| s.contains(a)))
        })
    }

    pub fn accepts(&self, t: &Trace) -> bool {
        self.accepting[self.run(t)]
    }

    /// Outgoing transitions of `q`, one per distinct target, in target order.
    pub fn transitions(&self, q: StateId) -> Vec<Transition> {
        let mut targets: Vec<StateId> = self.delta[q].clone();
        targets.sort_unstable();
        targets.dedup();
        targets
            .into_iter()
            .map(|target| {
                let letters: Vec<usize> = (0..self.num_letters())
                    .filter(|&l| self.delta[q][l] == target)
                    .collect();
                let vars: Vec<usize> = (0..self.atoms.len()).collect();
                let mut cubes = Vec::new();
                shannon_cubes(&letters, &vars, &mut Vec::new(), &mut cubes);
                Transition { cubes, target }
            })
            .collect()
    }

    /// Renames atoms in place; the letter encoding is unchanged.
    pub fn map_atoms(&self, f: impl Fn(&Atom) -> Atom) -> Dfa {
        Dfa {
            atoms: self.atoms.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// Minimal equivalent automaton with states numbered in BFS order.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.reachable_part();
        let blocks = hopcroft_partition(&trimmed);
        let mut block_of = vec![0; trimmed.num_states()];
        for (b, members) in blocks.iter().enumerate() {
            for &q in members {
                block_of[q] = b;
            }
        }
        let delta = blocks
            .iter()
            .map(|m| trimmed.delta[m[0]].iter().map(|&t| block_of[t]).collect())
            .collect();
        let accepting = blocks.iter().map(|m| trimmed.accepting[m[0]]).collect();
        Dfa {
            atoms: trimmed.atoms.clone(),
            initial: block_of[trimmed.initial],
            accepting,
            delta,
        }
        .reachable_part()
    }

    /// Reachable states renumbered in BFS order (letters ascending).
    pub fn reachable_part(&self) -> Dfa {
        let mut order = vec![usize::MAX; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        let mut seen = Vec::new();
        order[self.initial] = 0;
        seen.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if order[t] == usize::MAX {
                    order[t] = seen.len();
                    seen.push(t);
                    queue.push_back(t);
                }
            }
        }
        Dfa {
            atoms: self.atoms.clone(),
            initial: 0,
            accepting: seen.iter().map(|&q| self.accepting[q]).collect(),
            delta: seen
                .iter()
                .map(|&q| self.delta[q].iter().map(|&t| order[t]).collect())
                .collect(),
        }
    }

    /// Graph isomorphism of the reachable parts, matching atoms by value.
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        let a_atoms: BTreeSet<&Atom> = self.atoms.iter().collect();
        let b_atoms: BTreeSet<&Atom> = other.atoms.iter().collect();
        if a_atoms != b_atoms || self.atoms.len() != other.atoms.len() {
            return false;
        }
        // bit i of a letter of `self` is bit perm[i] in `other`
        let perm: Vec<usize> = self
            .atoms
            .iter()
            .map(|a| other.atoms.iter().position(|b| b == a).unwrap())
            .collect();
        let translate = |l: usize| {
            perm.iter()
                .enumerate()
                .filter(|(i, _)| l & (1 << i) != 0)
                .fold(0, |m, (_, &j)| m | (1 << j))
        };
        let mut map: HashMap<StateId, StateId> = HashMap::new();
        let mut back: HashMap<StateId, StateId> = HashMap::new();
        let mut queue = VecDeque::from([(self.initial, other.initial)]);
        map.insert(self.initial, other.initial);
        back.insert(other.initial, self.initial);
        while let Some((p, q)) = queue.pop_front() {
            if self.accepting[p] != other.accepting[q] {
                return false;
            }
            for l in 0..self.num_letters() {
                let (tp, tq) = (self.delta[p][l], other.delta[q][translate(l)]);
                match (map.get(&tp), back.get(&tq)) {
                    (None, None) => {
                        map.insert(tp, tq);
                        back.insert(tq, tp);
                        queue.push_back((tp, tq));
                    }
                    (Some(&x), Some(&y)) if x == tq && y == tp => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.dot_with(name, |q| format!("q{q}"))
    }

    fn dot_with(&self, name: &str, label: impl Fn(StateId) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  init [shape=point];");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  s{q} [label=\"{}\", shape={shape}];", label(q));
        }
        let _ = writeln!(out, "  init -> s{};", self.initial);
        for q in 0..self.num_states() {
            for t in self.transitions(q) {
                let guard = t.guard(&self.atoms).to_string().replace('"', "\\\"");
                let _ = writeln!(out, "  s{q} -> s{} [label=\"{guard}\"];", t.target);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Decomposes a set of letters into disjoint cubes by Shannon expansion,
/// skipping variables the set does not depend on.
fn shannon_cubes(
    letters: &[usize],
    vars: &[usize],
    prefix: &mut Vec<GuardLiteral>,
    out: &mut Vec<Vec<GuardLiteral>>,
) {
    if letters.is_empty() {
        return;
    }
    if letters.len() == 1 << vars.len() {
        out.push(prefix.clone());
        return;
    }
    let (&v, rest) = vars.split_first().expect("non-full set has a free var");
    let mask = 1 << v;
    let hi: Vec<usize> = letters.iter().copied().filter(|l| l & mask != 0).collect();
    let lo: Vec<usize> = letters.iter().copied().filter(|l| l & mask == 0).collect();
    let hi_stripped: Vec<usize> = hi.iter().map(|l| l & !mask).collect();
    if hi_stripped == lo {
        // letters are enumerated in ascending order, so equal sets compare equal
        shannon_cubes(&lo, rest, prefix, out);
        return;
    }
    prefix.push((v, true));
    shannon_cubes(&hi_stripped, rest, prefix, out);
    prefix.pop();
    prefix.push((v, false));
    shannon_cubes(&lo, rest, prefix, out);
    prefix.pop();
}

/// Hopcroft partition refinement; returns the blocks of equivalent states,
/// each block's members ascending, blocks ordered by smallest member.
fn hopcroft_partition(d: &Dfa) -> Vec<Vec<StateId>> {
    let n = d.num_states();
    let letters = d.num_letters();
    let mut inverse = vec![vec![Vec::new(); n]; letters];
    for q in 0..n {
        for (l, &t) in d.delta[q].iter().enumerate() {
            inverse[l][t].push(q);
        }
    }
    let acc: Vec<StateId> = (0..n).filter(|&q| d.accepting[q]).collect();
    let rej: Vec<StateId> = (0..n).filter(|&q| !d.accepting[q]).collect();
    let mut blocks: Vec<Vec<StateId>> = Vec::new();
    let mut block_of = vec![0usize; n];
    for b in [acc, rej] {
        if !b.is_empty() {
            for &q in &b {
                block_of[q] = blocks.len();
            }
            blocks.push(b);
        }
    }
    let mut work: Vec<usize> = (0..blocks.len()).collect();
    let mut in_work = vec![true; blocks.len()];
    while let Some(a) = work.pop() {
        in_work[a] = false;
        let splitter = blocks[a].clone();
        for inv in inverse.iter() {
            let mut marked: HashMap<usize, Vec<StateId>> = HashMap::new();
            for &t in &splitter {
                for &q in &inv[t] {
                    marked.entry(block_of[q]).or_default().push(q);
                }
            }
            let mut keys: Vec<usize> = marked.keys().copied().collect();
            keys.sort_unstable();
            for y in keys {
                let mut hit = marked.remove(&y).unwrap();
                hit.sort_unstable();
                hit.dedup();
                if hit.len() == blocks[y].len() {
                    continue;
                }
                let rest: Vec<StateId> = blocks[y]
                    .iter()
                    .copied()
                    .filter(|q| hit.binary_search(q).is_err())
                    .collect();
                let new_id = blocks.len();
                for &q in &hit {
                    block_of[q] = new_id;
                }
                blocks[y] = rest;
                blocks.push(hit);
                in_work.push(false);
                if in_work[y] {
                    work.push(new_id);
                    in_work[new_id] = true;
                } else {
                    let smaller = if blocks[y].len() <= blocks[new_id].len() {
                        y
                    } else {
                        new_id
                    };
                    work.push(smaller);
                    in_work[smaller] = true;
                }
            }
        }
    }
    blocks.sort_by_key(|b| b[0]);
    blocks
}

/// Translates a formula with the construction matching its dialect.
pub fn to_dfa(f: &Formula, opts: &AutomatonOptions) -> Result<Dfa, AutomatonError> {
    match f.dialect()? {
        Dialect::Ltlf => ltlf_to_dfa(f, opts),
        Dialect::Pltlf => pltlf_to_dfa(f, opts),
    }
}

fn check_atoms(f: &Formula, opts: &AutomatonOptions) -> Result<Vec<Atom>, AutomatonError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    if atoms.len() > opts.max_atoms {
        return Err(AutomatonError::TooManyAtoms {
            count: atoms.len(),
            cap: opts.max_atoms,
        });
    }
    Ok(atoms)
}

/// An obligation for the next position: `(node, strong)`. A strong
/// obligation requires the next position to exist.
type Obligation = (usize, bool);
type Clause = Vec<Obligation>;
type Dnf = Vec<Clause>;

struct NfaBuilder {
    atom_index: HashMap<Atom, usize>,
    nodes: Vec<Formula>,
    node_ids: HashMap<Formula, usize>,
}

fn dnf_or(mut a: Dnf, b: Dnf) -> Dnf {
    a.extend(b);
    simplify(a)
}

fn dnf_and(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c: Clause = x.iter().chain(y.iter()).copied().collect();
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
    }
    simplify(out)
}

/// Removes duplicate and subsumed (superset) clauses.
fn simplify(mut d: Dnf) -> Dnf {
    d.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    d.dedup();
    let mut kept: Dnf = Vec::new();
    for c in d {
        if !kept.iter().any(|k| is_subset(k, &c)) {
            kept.push(c);
        }
    }
    kept
}

fn is_subset(small: &[Obligation], big: &[Obligation]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

impl NfaBuilder {
    fn intern(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.node_ids.get(f) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(f.clone());
        self.node_ids.insert(f.clone(), id);
        id
    }

    fn delta(&mut self, f: &Formula, letter: usize) -> Dnf {
        use Formula::*;
        let truth = |b: bool| if b { vec![vec![]] } else { vec![] };
        match f {
            True => truth(true),
            False => truth(false),
            Atom(a) => truth(letter & (1 << self.atom_index[a]) != 0),
            Not(inner) => match &**inner {
                Atom(a) => truth(letter & (1 << self.atom_index[a]) == 0),
                True => truth(false),
                False => truth(true),
                _ => unreachable!("input is in negation normal form"),
            },
            And(a, b) => {
                let (x, y) = (self.delta(a, letter), self.delta(b, letter));
                dnf_and(&x, &y)
            }
            Or(a, b) => {
                let (x, y) = (self.delta(a, letter), self.delta(b, letter));
                dnf_or(x, y)
            }
            Next(a) => vec![vec![(self.intern(a), true)]],
            WeakNext(a) => vec![vec![(self.intern(a), false)]],
            Until(a, b) => {
                let me = vec![vec![(self.intern(f), true)]];
                let now_b = self.delta(b, letter);
                let now_a = self.delta(a, letter);
                dnf_or(now_b, dnf_and(&now_a, &me))
            }
            Release(a, b) => {
                let me = vec![vec![(self.intern(f), false)]];
                let now_b = self.delta(b, letter);
                let now_a = self.delta(a, letter);
                dnf_and(&now_b, &dnf_or(now_a, me))
            }
            Eventually(a) => {
                let me = vec![vec![(self.intern(f), true)]];
                let now = self.delta(a, letter);
                dnf_or(now, me)
            }
            Always(a) => {
                let me = vec![vec![(self.intern(f), false)]];
                let now = self.delta(a, letter);
                dnf_and(&now, &me)
            }
            Yesterday(_) | Since(..) | Once(_) | Historically(_) => {
                unreachable!("checked to be LTLf")
            }
        }
    }
}

/// Truth of an NNF formula on the empty suffix.
fn holds_on_empty(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | WeakNext(_) | Release(..) | Always(_) => true,
        False | Atom(_) | Next(_) | Until(..) | Eventually(_) => false,
        Not(a) => !holds_on_empty(a),
        And(a, b) => holds_on_empty(a) && holds_on_empty(b),
        Or(a, b) => holds_on_empty(a) || holds_on_empty(b),
        Yesterday(_) | Since(..) | Once(_) | Historically(_) => false,
    }
}

/// LTLf to minimal DFA: negation normal form, an NFA whose states are sets of
/// next-step obligations, subset construction completed with a rejecting
/// sink, then minimization.
pub fn ltlf_to_dfa(f: &Formula, opts: &AutomatonOptions) -> Result<Dfa, AutomatonError> {
    if f.dialect()? != Dialect::Ltlf {
        return Err(AutomatonError::DialectMismatch {
            expected: Dialect::Ltlf,
        });
    }
    let atoms = check_atoms(f, opts)?;
    let root = to_nnf(f);
    let mut b = NfaBuilder {
        atom_index: atoms.iter().cloned().zip(0..).collect(),
        nodes: Vec::new(),
        node_ids: HashMap::new(),
    };
    let letters = 1usize << atoms.len();

    // NFA state 0 is "root must hold here"; other states are clauses.
    let mut nfa_clauses: Vec<Clause> = vec![Vec::new()];
    let mut nfa_ids: HashMap<Clause, usize> = HashMap::new();
    let mut nfa_accepting = vec![holds_on_empty(&root)];
    let mut nfa_succ: HashMap<(usize, usize), Vec<usize>> = HashMap::new();

    let mut dfa_states: Vec<Vec<usize>> = vec![vec![0]];
    let mut dfa_ids: HashMap<Vec<usize>, usize> = HashMap::from([(vec![0], 0)]);
    let mut delta: Vec<Vec<StateId>> = Vec::new();
    let mut next = 0;
    while next < dfa_states.len() {
        let current = dfa_states[next].clone();
        let mut row = Vec::with_capacity(letters);
        for letter in 0..letters {
            let mut targets: Vec<usize> = Vec::new();
            for &s in &current {
                if let Some(ts) = nfa_succ.get(&(s, letter)) {
                    targets.extend(ts);
                    continue;
                }
                let dnf = if s == 0 {
                    b.delta(&root, letter)
                } else {
                    let nodes: Vec<Formula> = nfa_clauses[s]
                        .iter()
                        .map(|&(n, _)| b.nodes[n].clone())
                        .collect();
                    nodes.iter().fold(vec![vec![]], |acc, n| {
                        let d = b.delta(n, letter);
                        dnf_and(&acc, &d)
                    })
                };
                let mut ts = Vec::with_capacity(dnf.len());
                for clause in dnf {
                    let id = match nfa_ids.get(&clause) {
                        Some(&id) => id,
                        None => {
                            let id = nfa_clauses.len();
                            nfa_accepting.push(clause.iter().all(|&(_, strong)| !strong));
                            nfa_ids.insert(clause.clone(), id);
                            nfa_clauses.push(clause);
                            if nfa_clauses.len() > opts.max_states {
                                return Err(AutomatonError::TooManyStates {
                                    cap: opts.max_states,
                                });
                            }
                            id
                        }
                    };
                    ts.push(id);
                }
                nfa_succ.insert((s, letter), ts.clone());
                targets.extend(ts);
            }
            targets.sort_unstable();
            targets.dedup();
            // drop clauses subsumed by a smaller clause in the same subset
            let pruned: Vec<usize> = targets
                .iter()
                .copied()
                .filter(|&t| {
                    !targets.iter().any(|&o| {
                        o != t
                            && nfa_clauses[o].len() < nfa_clauses[t].len()
                            && is_subset(&nfa_clauses[o], &nfa_clauses[t])
                    })
                })
                .collect();
            let id = match dfa_ids.get(&pruned) {
                Some(&id) => id,
                None => {
                    let id = dfa_states.len();
                    if id >= opts.max_states {
                        return Err(AutomatonError::TooManyStates {
                            cap: opts.max_states,
                        });
                    }
                    dfa_ids.insert(pruned.clone(), id);
                    dfa_states.push(pruned);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        next += 1;
    }
    let accepting = dfa_states
        .iter()
        .map(|set| set.iter().any(|&s| nfa_accepting[s]))
        .collect();
    Ok(Dfa {
        atoms,
        initial: 0,
        accepting,
        delta,
    }
    .minimize())
}

enum PastNode {
    True,
    False,
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Yesterday(usize),
    Since(usize, usize),
    Once(usize),
    Historically(usize),
}

const MAX_PAST_NODES: usize = 64;

fn past_nodes(
    f: &Formula,
    atom_index: &HashMap<Atom, usize>,
    nodes: &mut Vec<PastNode>,
    ids: &mut HashMap<Formula, usize>,
) -> Result<usize, AutomatonError> {
    if let Some(&id) = ids.get(f) {
        return Ok(id);
    }
    let mut rec = |g: &Formula, nodes: &mut Vec<PastNode>| past_nodes(g, atom_index, nodes, ids);
    let node = match f {
        Formula::True => PastNode::True,
        Formula::False => PastNode::False,
        Formula::Atom(a) => PastNode::Atom(atom_index[a]),
        Formula::Not(a) => PastNode::Not(rec(a, nodes)?),
        Formula::And(a, b) => {
            let x = rec(a, nodes)?;
            PastNode::And(x, rec(b, nodes)?)
        }
        Formula::Or(a, b) => {
            let x = rec(a, nodes)?;
            PastNode::Or(x, rec(b, nodes)?)
        }
        Formula::Yesterday(a) => PastNode::Yesterday(rec(a, nodes)?),
        Formula::Since(a, b) => {
            let x = rec(a, nodes)?;
            PastNode::Since(x, rec(b, nodes)?)
        }
        Formula::Once(a) => PastNode::Once(rec(a, nodes)?),
        Formula::Historically(a) => PastNode::Historically(rec(a, nodes)?),
        _ => {
            return Err(AutomatonError::DialectMismatch {
                expected: Dialect::Pltlf,
            })
        }
    };
    let id = nodes.len();
    if id >= MAX_PAST_NODES {
        return Err(AutomatonError::TooManySubformulas {
            cap: MAX_PAST_NODES,
        });
    }
    nodes.push(node);
    ids.insert(f.clone(), id);
    Ok(id)
}

/// PLTLf to minimal DFA. A state is the truth assignment of every subformula
/// at the last position read; reading a letter recomputes it from the
/// previous assignment. The initial state stands for the empty trace.
pub fn pltlf_to_dfa(f: &Formula, opts: &AutomatonOptions) -> Result<Dfa, AutomatonError> {
    f.dialect()?;
    if f.first_future().is_some() {
        return Err(AutomatonError::DialectMismatch {
            expected: Dialect::Pltlf,
        });
    }
    let atoms = check_atoms(f, opts)?;
    let atom_index: HashMap<Atom, usize> = atoms.iter().cloned().zip(0..).collect();
    let mut nodes = Vec::new();
    let root = past_nodes(f, &atom_index, &mut nodes, &mut HashMap::new())?;
    let letters = 1usize << atoms.len();

    let bit = |v: u64, i: usize| v & (1 << i) != 0;
    let step = |prev: Option<u64>, letter: usize| -> u64 {
        let mut v = 0u64;
        for (i, n) in nodes.iter().enumerate() {
            let was = |j: usize| prev.map(|p| bit(p, j));
            let b = match *n {
                PastNode::True => true,
                PastNode::False => false,
                PastNode::Atom(k) => letter & (1 << k) != 0,
                PastNode::Not(a) => !bit(v, a),
                PastNode::And(a, c) => bit(v, a) && bit(v, c),
                PastNode::Or(a, c) => bit(v, a) || bit(v, c),
                PastNode::Yesterday(a) => was(a).unwrap_or(false),
                PastNode::Since(a, c) => bit(v, c) || (bit(v, a) && was(i).unwrap_or(false)),
                PastNode::Once(a) => bit(v, a) || was(i).unwrap_or(false),
                PastNode::Historically(a) => bit(v, a) && was(i).unwrap_or(true),
            };
            if b {
                v |= 1 << i;
            }
        }
        v
    };

    let mut values: Vec<Option<u64>> = vec![None];
    let mut ids: HashMap<Option<u64>, usize> = HashMap::from([(None, 0)]);
    let mut delta = Vec::new();
    let mut next = 0;
    while next < values.len() {
        let prev = values[next];
        let mut row = Vec::with_capacity(letters);
        for letter in 0..letters {
            let v = Some(step(prev, letter));
            let id = match ids.get(&v) {
                Some(&id) => id,
                None => {
                    let id = values.len();
                    if id >= opts.max_states {
                        return Err(AutomatonError::TooManyStates {
                            cap: opts.max_states,
                        });
                    }
                    ids.insert(v, id);
                    values.push(v);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        next += 1;
    }
    let accepting = values
        .iter()
        .map(|v| match v {
            None => matches!(f, Formula::True),
            Some(v) => bit(*v, root),
        })
        .collect();
    Ok(Dfa {
        atoms,
        initial: 0,
        accepting,
        delta,
    }
    .minimize())
}

impl Formula {
    fn first_future(&self) -> Option<&Formula> {
        use Formula::*;
        if matches!(
            self,
            Next(_) | WeakNext(_) | Until(..) | Release(..) | Eventually(_) | Always(_)
        ) {
            return Some(self);
        }
        self.children().into_iter().find_map(|c| c.first_future())
    }
}

/// A DFA whose atom arguments for the objects of interest are replaced by
/// variables; `object_map` lists `(object, variable)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdfa {
    pub automaton: Dfa,
    pub object_map: Vec<(String, String)>,
}

fn variable_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => format!("v{i}"),
    }
}

/// Lifts `d` over `objects`, introducing one variable per object in order.
pub fn lift(d: &Dfa, objects: &[String]) -> Result<Pdfa, AutomatonError> {
    for o in objects {
        if !d.atoms.iter().any(|a| a.args.contains(o)) {
            return Err(AutomatonError::UnknownObject(o.clone()));
        }
    }
    let object_map: Vec<(String, String)> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.clone(), variable_name(i)))
        .collect();
    let automaton = d.map_atoms(|a| substitute(a, &object_map, false));
    Ok(Pdfa {
        automaton,
        object_map,
    })
}

fn substitute(a: &Atom, map: &[(String, String)], inverse: bool) -> Atom {
    Atom {
        predicate: a.predicate.clone(),
        args: a
            .args
            .iter()
            .map(|x| {
                map.iter()
                    .find(|(o, v)| if inverse { v == x } else { o == x })
                    .map(|(o, v)| if inverse { o.clone() } else { v.clone() })
                    .unwrap_or_else(|| x.clone())
            })
            .collect(),
    }
}

impl Pdfa {
    pub fn variables(&self) -> Vec<&str> {
        self.object_map.iter().map(|(_, v)| v.as_str()).collect()
    }

    /// Applies the inverse object map, recovering the ground automaton.
    pub fn instantiate(&self) -> Dfa {
        self.automaton
            .map_atoms(|a| substitute(a, &self.object_map, true))
    }

    pub fn state_label(&self, q: StateId) -> String {
        format!("qp{q}({})", self.variables().join(","))
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.automaton.dot_with(name, |q| self.state_label(q))
    }
}
