//! Strong-cyclic planning over explicit state spaces.

use std::collections::{HashMap, VecDeque};
use std::io::Read as _;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::compile::{AugmentedProblem, EmitMode};
use crate::fond::{ActionLabel, GroundCondition, GroundedFond, State};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("no strong-cyclic policy exists")]
    Unsolvable,
    #[error("state space exceeded the cap of {cap} states")]
    StateCap { cap: usize },
    #[error("planner timed out")]
    Timeout,
    #[error("model has no goal")]
    NoGoal,
    #[error("external planner failed: {0}")]
    External(String),
    #[error("malformed policy line {line}: {message}")]
    PolicyFormat { line: usize, message: String },
}

#[derive(Debug, Clone, Copy)]
pub struct PlanOptions {
    pub max_states: usize,
    pub deadline: Option<Instant>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            max_states: 2_000_000,
            deadline: None,
        }
    }
}

impl PlanOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        PlanOptions {
            deadline: Some(Instant::now() + timeout),
            ..Default::default()
        }
    }

    fn check_deadline(&self) -> Result<(), PlanError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(PlanError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Memoryless policy: one action per state reachable under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    /// Entries in breadth-first order from the initial state.
    entries: Vec<(State, usize)>,
    index: HashMap<State, usize>,
}

impl Policy {
    pub fn from_entries(entries: Vec<(State, usize)>) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect();
        Policy { entries, index }
    }

    pub fn action(&self, s: &State) -> Option<usize> {
        self.index.get(s).map(|&i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(State, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One line per entry: the state's fluents, a tab, then the action.
    pub fn to_text(&self, m: &GroundedFond) -> String {
        let mut out = String::new();
        for (s, a) in &self.entries {
            out.push_str(&m.format_state(s));
            out.push('\t');
            out.push_str(&m.actions[*a].label.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(m: &GroundedFond, text: &str) -> Result<Policy, PlanError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| PlanError::PolicyFormat {
                line: i + 1,
                message,
            };
            let (state, action) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `state<TAB>action`".into()))?;
            let s = m.parse_state(state).map_err(|e| bad(e.to_string()))?;
            let label: ActionLabel = action.parse().map_err(|e: crate::fond::PddlError| bad(e.to_string()))?;
            let a = m
                .action(&label)
                .ok_or_else(|| bad(format!("unknown action {label}")))?;
            entries.push((s, a));
        }
        Ok(Policy::from_entries(entries))
    }
}

struct Graph {
    states: Vec<State>,
    goal: Vec<bool>,
    /// `(action, successor ids)` for each non-goal state.
    edges: Vec<Vec<(usize, Vec<usize>)>>,
}

fn explore(m: &GroundedFond, goal: &GroundCondition, opts: &PlanOptions) -> Result<Graph, PlanError> {
    let mut ids: HashMap<State, usize> = HashMap::new();
    let mut g = Graph {
        states: vec![],
        goal: vec![],
        edges: vec![],
    };
    let mut queue = VecDeque::new();
    ids.insert(m.initial.clone(), 0);
    g.states.push(m.initial.clone());
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        if i % 1024 == 0 {
            opts.check_deadline()?;
        }
        let s = g.states[i].clone();
        let is_goal = goal.holds(&s);
        g.goal.push(is_goal);
        let mut out = Vec::new();
        if !is_goal {
            for a in m.applicable(&s) {
                let mut succ = Vec::new();
                for n in m.successors_unchecked(&s, a) {
                    let id = match ids.get(&n) {
                        Some(&id) => id,
                        None => {
                            let id = g.states.len();
                            if id >= opts.max_states {
                                return Err(PlanError::StateCap {
                                    cap: opts.max_states,
                                });
                            }
                            ids.insert(n.clone(), id);
                            g.states.push(n);
                            queue.push_back(id);
                            id
                        }
                    };
                    succ.push(id);
                }
                out.push((a, succ));
            }
        }
        g.edges.push(out);
    }
    Ok(g)
}

/// Goal distances over pairs whose successors all lie in `alive`.
fn backward_distances(g: &Graph, alive: &[bool], preds: &[Vec<(usize, usize)>]) -> Vec<Option<usize>> {
    let n = g.states.len();
    let valid = |s: usize, k: usize| g.edges[s][k].1.iter().all(|&t| alive[t]);
    let mut dist = vec![None; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if alive[s] && g.goal[s] {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(t) = queue.pop_front() {
        let d = dist[t].unwrap();
        for &(s, k) in &preds[t] {
            if alive[s] && dist[s].is_none() && valid(s, k) {
                dist[s] = Some(d + 1);
                queue.push_back(s);
            }
        }
    }
    dist
}

/// Finds a strong-cyclic policy by the greatest fixpoint over the reachable
/// AND-OR graph. Prefers, per state, the action whose closest outcome is
/// nearest to the goal; ties go to the lowest action index.
pub fn solve_strong_cyclic(
    m: &GroundedFond,
    goal: &GroundCondition,
    opts: &PlanOptions,
) -> Result<Policy, PlanError> {
    let g = explore(m, goal, opts)?;
    let n = g.states.len();
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (s, edges) in g.edges.iter().enumerate() {
        for (k, (_, succ)) in edges.iter().enumerate() {
            for &t in succ {
                if preds[t].last() != Some(&(s, k)) {
                    preds[t].push((s, k));
                }
            }
        }
    }
    let mut alive = vec![true; n];
    let dist = loop {
        opts.check_deadline()?;
        let dist = backward_distances(&g, &alive, &preds);
        let mut changed = false;
        for s in 0..n {
            if alive[s] && dist[s].is_none() {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            break dist;
        }
    };
    if !alive[0] {
        return Err(PlanError::Unsolvable);
    }

    let mut entries = Vec::new();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(s) = queue.pop_front() {
        if g.goal[s] {
            continue;
        }
        let best = g.edges[s]
            .iter()
            .filter(|(_, succ)| succ.iter().all(|&t| alive[t]))
            .min_by_key(|(a, succ)| (succ.iter().filter_map(|&t| dist[t]).min(), *a))
            .expect("alive non-goal states keep a valid action");
        entries.push((g.states[s].clone(), best.0));
        for &t in &best.1 {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    Ok(Policy::from_entries(entries))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyReport {
    pub closed: bool,
    pub strong_cyclic: bool,
    pub counterexample: Option<State>,
}

/// Re-checks closure and strong cyclicity by traversing the policy graph.
pub fn verify_policy(m: &GroundedFond, goal: &GroundCondition, p: &Policy) -> PolicyReport {
    let mut ids: HashMap<State, usize> = HashMap::new();
    let mut states = vec![m.initial.clone()];
    ids.insert(m.initial.clone(), 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut report = PolicyReport {
        closed: true,
        strong_cyclic: true,
        counterexample: None,
    };
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        let mut out = Vec::new();
        if !goal.holds(&s) {
            match p.action(&s) {
                Some(a) if m.is_applicable(&s, a) => {
                    for n in m.successors_unchecked(&s, a) {
                        let id = *ids.entry(n.clone()).or_insert_with(|| {
                            states.push(n);
                            states.len() - 1
                        });
                        out.push(id);
                    }
                }
                _ => {
                    if report.closed {
                        report.closed = false;
                        report.counterexample = Some(s);
                    }
                }
            }
        }
        succ.push(out);
        i += 1;
    }
    // every reached state must be able to reach a goal state
    let n = states.len();
    let mut preds = vec![Vec::new(); n];
    for (s, out) in succ.iter().enumerate() {
        for &t in out {
            preds[t].push(s);
        }
    }
    let mut good = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| goal.holds(&states[s])).collect();
    for &s in &queue {
        good[s] = true;
    }
    while let Some(t) = queue.pop_front() {
        for &s in &preds[t] {
            if !good[s] {
                good[s] = true;
                queue.push_back(s);
            }
        }
    }
    if let Some(bad) = (0..n).find(|&s| !good[s]) {
        report.strong_cyclic = false;
        if report.counterexample.is_none() {
            report.counterexample = Some(states[bad].clone());
        }
    }
    report
}

/// Anything that can produce a strong-cyclic policy for a compiled goal.
pub trait Planner: Send + Sync {
    fn solve(&self, problem: &AugmentedProblem, opts: &PlanOptions) -> Result<Policy, PlanError>;

    fn name(&self) -> String;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct BuiltinPlanner;

impl Planner for BuiltinPlanner {
    fn solve(&self, problem: &AugmentedProblem, opts: &PlanOptions) -> Result<Policy, PlanError> {
        let goal = problem.model.goal.as_ref().ok_or(PlanError::NoGoal)?;
        solve_strong_cyclic(&problem.model, goal, opts)
    }

    fn name(&self) -> String {
        "builtin".into()
    }
}

/// Runs `sh -c "<command> <domain.pddl> <problem.pddl>"` on the grounded
/// emission. The command prints a policy in [`Policy::to_text`] format on
/// stdout; exit status 2 or the single word `UNSOLVABLE` means no policy.
#[derive(Debug, Clone)]
pub struct ExternalPlanner {
    pub command: String,
}

impl Planner for ExternalPlanner {
    fn solve(&self, problem: &AugmentedProblem, opts: &PlanOptions) -> Result<Policy, PlanError> {
        let ext = |e: std::io::Error| PlanError::External(e.to_string());
        let dir = tempfile::tempdir().map_err(ext)?;
        let (dt, pt) = problem.emit_pddl(EmitMode::Grounded);
        let dp = dir.path().join("domain.pddl");
        let pp = dir.path().join("problem.pddl");
        std::fs::write(&dp, dt).map_err(ext)?;
        std::fs::write(&pp, pt).map_err(ext)?;
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(format!("{} \"$0\" \"$1\"", self.command))
            .arg(&dp)
            .arg(&pp)
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(ext)?;
        let mut stdout = child.stdout.take().expect("piped");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        let status = loop {
            if let Some(st) = child.try_wait().map_err(ext)? {
                break st;
            }
            if opts.deadline.is_some_and(|d| Instant::now() >= d) {
                let _ = child.kill();
                let _ = child.wait();
                return Err(PlanError::Timeout);
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        let out = reader
            .join()
            .map_err(|_| PlanError::External("reader thread panicked".into()))?
            .map_err(ext)?;
        if status.code() == Some(2) || out.trim() == "UNSOLVABLE" {
            return Err(PlanError::Unsolvable);
        }
        if !status.success() {
            return Err(PlanError::External(format!("`{}` exited with {status}", self.command)));
        }
        Policy::from_text(&problem.model, &out)
    }

    fn name(&self) -> String {
        format!("exec:{}", self.command)
    }
}

/// Parses `builtin` or `exec:<command>`.
pub fn planner_from_spec(spec: &str) -> Result<Box<dyn Planner>, PlanError> {
    match spec {
        "builtin" => Ok(Box::new(BuiltinPlanner)),
        s => match s.strip_prefix("exec:") {
            Some(cmd) if !cmd.trim().is_empty() => Ok(Box::new(ExternalPlanner {
                command: cmd.to_string(),
            })),
            _ => Err(PlanError::External(format!("unknown planner `{s}`"))),
        },
    }
}

/// Counts invocations of the wrapped planner.
pub struct CountingPlanner<'a> {
    inner: &'a dyn Planner,
    calls: AtomicUsize,
}

impl<'a> CountingPlanner<'a> {
    pub fn new(inner: &'a dyn Planner) -> Self {
        CountingPlanner {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Planner for CountingPlanner<'_> {
    fn solve(&self, problem: &AugmentedProblem, opts: &PlanOptions) -> Result<Policy, PlanError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.solve(problem, opts)
    }

    fn name(&self) -> String {
        self.inner.name()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::compile_goal;
    use crate::data;
    use crate::fond::{self, parse_domain, parse_problem};
    use crate::logic::parse_formula;

    fn detour() -> AugmentedProblem {
        let d = parse_domain(data::TIREWORLD_DOMAIN).unwrap();
        let p = parse_problem(data::TIREWORLD_GRID, &d).unwrap();
        compile_goal(&d, &p, &parse_formula("F vAt_22").unwrap()).unwrap()
    }

    #[test]
    fn detour_policy_is_strong_cyclic() {
        let aug = detour();
        let goal = aug.model.goal.clone().unwrap();
        let p = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let r = verify_policy(&aug.model, &goal, &p);
        assert!(r.closed && r.strong_cyclic, "{r:?}");
        let first_domain = p
            .entries()
            .iter()
            .map(|(_, a)| *a)
            .find(|&a| !aug.is_trans(a))
            .unwrap();
        assert_eq!(aug.model.actions[first_domain].label.to_string(), "(move 11 21)");
    }

    #[test]
    fn goal_at_start_gives_empty_policy() {
        let d = parse_domain(data::TIREWORLD_DOMAIN).unwrap();
        let p = parse_problem(data::TIREWORLD_GRID, &d).unwrap();
        let m = fond::ground(&d, &p).unwrap();
        let g = GroundCondition::Fluent(m.fluent(&crate::logic::Atom::new("vAt", &["11"])).unwrap());
        let pol = solve_strong_cyclic(&m, &g, &PlanOptions::default()).unwrap();
        assert!(pol.is_empty());
        let r = verify_policy(&m, &g, &pol);
        assert!(r.closed && r.strong_cyclic);
    }

    #[test]
    fn unreachable_goal_is_unsolvable() {
        let d = parse_domain(data::TIREWORLD_DOMAIN).unwrap();
        let p = parse_problem(data::TIREWORLD_TRAP, &d).unwrap();
        let m = fond::ground(&d, &p).unwrap();
        assert!(matches!(
            solve_strong_cyclic(&m, &GroundCondition::False, &PlanOptions::default()),
            Err(PlanError::Unsolvable)
        ));
        let goal = m.goal.clone().unwrap();
        assert!(matches!(
            solve_strong_cyclic(&m, &goal, &PlanOptions::default()),
            Err(PlanError::Unsolvable)
        ));
    }

    #[test]
    fn unmapped_state_breaks_closure() {
        let aug = detour();
        let goal = aug.model.goal.clone().unwrap();
        let p = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let mut entries = p.entries().to_vec();
        let dropped = entries.pop().unwrap().0;
        let r = verify_policy(&aug.model, &goal, &Policy::from_entries(entries));
        assert!(!r.closed);
        assert_eq!(r.counterexample, Some(dropped));
    }

    #[test]
    fn weak_policy_is_not_strong_cyclic() {
        // drive straight on the trap map; a flat tire strands the car
        let d = parse_domain(data::TIREWORLD_DOMAIN).unwrap();
        let p = parse_problem(data::TIREWORLD_TRAP, &d).unwrap();
        let m = fond::ground(&d, &p).unwrap();
        let goal = m.goal.clone().unwrap();
        let mut entries = Vec::new();
        let mut frontier = vec![m.initial.clone()];
        while let Some(s) = frontier.pop() {
            if goal.holds(&s) {
                continue;
            }
            if let Some(&a) = m.applicable(&s).first() {
                entries.push((s.clone(), a));
                frontier.extend(m.successors(&s, a).unwrap());
            }
        }
        let r = verify_policy(&m, &goal, &Policy::from_entries(entries));
        assert!(!r.strong_cyclic);
    }

    #[test]
    fn state_cap_is_enforced() {
        let aug = detour();
        let opts = PlanOptions {
            max_states: 3,
            deadline: None,
        };
        assert!(matches!(
            BuiltinPlanner.solve(&aug, &opts),
            Err(PlanError::StateCap { cap: 3 })
        ));
    }

    #[test]
    fn policy_text_round_trips() {
        let aug = detour();
        let p = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let text = p.to_text(&aug.model);
        assert_eq!(Policy::from_text(&aug.model, &text).unwrap(), p);
    }

    #[test]
    fn solving_is_deterministic() {
        let aug = detour();
        let a = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let b = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counting_planner_counts() {
        let aug = detour();
        let c = CountingPlanner::new(&BuiltinPlanner);
        c.solve(&aug, &PlanOptions::default()).unwrap();
        c.solve(&aug, &PlanOptions::default()).unwrap();
        assert_eq!(c.calls(), 2);
    }

    #[test]
    fn planner_specs_parse() {
        assert_eq!(planner_from_spec("builtin").unwrap().name(), "builtin");
        assert_eq!(planner_from_spec("exec:my-planner").unwrap().name(), "exec:my-planner");
        assert!(planner_from_spec("exec:").is_err());
        assert!(planner_from_spec("prp").is_err());
    }
}
