//! Synthetic recognition datasets and the TPR/FPR/FNR harness.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data;
use crate::executions::Execution;
use crate::fond::{self, ActionLabel, Domain, GroundedFond, ProblemInstance, TypedName};
use crate::logic::{evaluate, Atom, Formula};
use crate::par::{self, Parallelism};
use crate::planner::BuiltinPlanner;
use crate::recognizer::{
    analyze_goal, recognize_with, GoalAnalysis, RecognitionProblem, RecognizerOptions,
};

pub const LEVELS: [u32; 5] = [10, 30, 50, 70, 100];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("dataset {dataset}: could not generate problem {index} after {attempts} attempts")]
    Generation {
        dataset: String,
        index: usize,
        attempts: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Tireworld,
    Blocks,
    Logistics,
}

impl DomainKind {
    pub fn domain(self) -> Domain {
        let text = match self {
            DomainKind::Tireworld => data::TIREWORLD_DOMAIN,
            DomainKind::Blocks => data::BLOCKS_DOMAIN,
            DomainKind::Logistics => data::LOGISTICS_DOMAIN,
        };
        fond::parse_domain(text).expect("bundled domains parse")
    }
}

/// Goal shapes; `p1`, `p2`, `p3` are distinct atoms drawn per goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// F p1
    Eventually,
    /// F(p1 & X F p2)
    Ordered,
    /// p1 U p2
    Until,
    /// p1 & O p2
    Once,
    /// p1 & (!p2 S p3)
    Since,
    /// F(p1 & p2)
    Conjunction,
}

impl Template {
    pub const ALL: [Template; 6] = [
        Template::Eventually,
        Template::Ordered,
        Template::Until,
        Template::Once,
        Template::Since,
        Template::Conjunction,
    ];

    fn arity(self) -> usize {
        match self {
            Template::Eventually => 1,
            Template::Since => 3,
            _ => 2,
        }
    }

    pub fn instantiate(self, p: &[Atom]) -> Formula {
        let a = |i: usize| Formula::Atom(p[i].clone());
        match self {
            Template::Eventually => Formula::eventually(a(0)),
            Template::Ordered => {
                Formula::eventually(Formula::and(a(0), Formula::next(Formula::eventually(a(1)))))
            }
            Template::Until => Formula::until(a(0), a(1)),
            Template::Once => Formula::and(a(0), Formula::once(a(1))),
            Template::Since => Formula::and(a(0), Formula::since(Formula::not(a(1)), a(2))),
            Template::Conjunction => Formula::eventually(Formula::and(a(0), a(1))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub name: String,
    pub domain: DomainKind,
    /// Templates are used round-robin, one per problem.
    pub templates: Vec<Template>,
    #[serde(default = "default_problems")]
    pub problems: usize,
    #[serde(default = "default_goals")]
    pub goals_per_problem: usize,
}

fn default_problems() -> usize {
    30
}

fn default_goals() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub datasets: Vec<DatasetConfig>,
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
    #[serde(default)]
    pub seed: u64,
    /// Per-recognition timeout in seconds.
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    /// When false, time columns are written as NA so that outputs depend
    /// only on the seed.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub parallelism: Parallelism,
}

fn default_levels() -> Vec<u32> {
    LEVELS.to_vec()
}

fn default_timeout() -> f64 {
    600.0
}

impl BenchConfig {
    /// Three bundled domains, 30 problems each, all five levels.
    pub fn standard(seed: u64) -> Self {
        let ds = |name: &str, domain, templates: &[Template]| DatasetConfig {
            name: name.to_string(),
            domain,
            templates: templates.to_vec(),
            problems: 30,
            goals_per_problem: 4,
        };
        BenchConfig {
            datasets: vec![
                ds(
                    "tireworld",
                    DomainKind::Tireworld,
                    &[Template::Eventually, Template::Ordered, Template::Once],
                ),
                ds(
                    "blocks",
                    DomainKind::Blocks,
                    &[Template::Eventually, Template::Conjunction, Template::Once],
                ),
                ds(
                    "logistics",
                    DomainKind::Logistics,
                    &[Template::Eventually, Template::Ordered, Template::Since],
                ),
            ],
            levels: default_levels(),
            seed,
            timeout_s: default_timeout(),
            record_timing: false,
            parallelism: Parallelism::available(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.levels.is_empty() {
            return Err(BenchError::Config("levels must be nonempty".into()));
        }
        if let Some(l) = self.levels.iter().find(|&&l| l == 0 || l > 100) {
            return Err(BenchError::Config(format!("level {l} is not in 1..=100")));
        }
        for d in &self.datasets {
            if d.templates.is_empty() {
                return Err(BenchError::Config(format!("dataset {} has no templates", d.name)));
            }
            if d.goals_per_problem == 0 {
                return Err(BenchError::Config(format!("dataset {} needs goals", d.name)));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// instance generators

fn typed(names: &[String], ty: &str) -> Vec<TypedName> {
    names
        .iter()
        .map(|n| TypedName {
            name: n.clone(),
            ty: ty.into(),
        })
        .collect()
}

/// A random grid of one-way roads starting at location 11, with spares
/// scattered over most locations.
pub fn tireworld_instance(rng: &mut impl Rng) -> ProblemInstance {
    let (w, h) = (4, 3);
    let name = |x: usize, y: usize| format!("{x}{y}");
    let mut locs = Vec::new();
    let mut init = BTreeSet::new();
    for x in 1..=w {
        for y in 1..=h {
            let l = name(x, y);
            if x < w && (y == 1 || rng.gen_bool(0.6)) {
                init.insert(Atom::new("road", &[&l, &name(x + 1, y)]));
            }
            if y < h && rng.gen_bool(0.6) {
                init.insert(Atom::new("road", &[&l, &name(x, y + 1)]));
            }
            if x < w && y < h && rng.gen_bool(0.3) {
                init.insert(Atom::new("road", &[&l, &name(x + 1, y + 1)]));
            }
            if (x, y) != (1, 1) && rng.gen_bool(0.75) {
                init.insert(Atom::new("spare-in", &[&l]));
            }
            locs.push(l);
        }
    }
    init.insert(Atom::new("vAt", &["11"]));
    init.insert(Atom::prop("not-flattire"));
    ProblemInstance {
        name: "tire-grid".into(),
        domain: "triangle-tireworld".into(),
        objects: typed(&locs, "location"),
        init,
        goal: None,
    }
}

/// Three or four blocks stacked into random towers.
pub fn blocks_instance(rng: &mut impl Rng) -> ProblemInstance {
    let n = rng.gen_range(3..=4);
    let mut blocks: Vec<String> = ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect();
    let names = blocks.clone();
    blocks.shuffle(rng);
    let mut init = BTreeSet::new();
    let mut below: Option<String> = None;
    for b in &blocks {
        match below.take() {
            Some(c) if rng.gen_bool(0.5) => {
                init.insert(Atom::new("on", &[b, &c]));
            }
            Some(c) => {
                init.insert(Atom::new("clear", &[&c]));
                init.insert(Atom::new("ontable", &[b]));
            }
            None => {
                init.insert(Atom::new("ontable", &[b]));
            }
        }
        below = Some(b.clone());
    }
    if let Some(top) = below {
        init.insert(Atom::new("clear", &[&top]));
    }
    init.insert(Atom::prop("handempty"));
    ProblemInstance {
        name: "blocks-gen".into(),
        domain: "blocks-fond".into(),
        objects: typed(&names, "object"),
        init,
        goal: None,
    }
}

/// One truck, two packages, three or four locations on a ring-like map.
pub fn logistics_instance(rng: &mut impl Rng) -> ProblemInstance {
    let n = rng.gen_range(3..=4);
    let locs: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    let mut init = BTreeSet::new();
    for i in 0..n - 1 {
        init.insert(Atom::new("link", &[&locs[i], &locs[i + 1]]));
        init.insert(Atom::new("link", &[&locs[i + 1], &locs[i]]));
    }
    if rng.gen_bool(0.5) {
        init.insert(Atom::new("link", &[&locs[n - 1], &locs[0]]));
        init.insert(Atom::new("link", &[&locs[0], &locs[n - 1]]));
    }
    init.insert(Atom::new("at-truck", &["t1", locs.choose(rng).unwrap()]));
    let packages = vec!["p1".to_string(), "p2".to_string()];
    for p in &packages {
        init.insert(Atom::new("at", &[p, locs.choose(rng).unwrap()]));
    }
    let mut objects = typed(&["t1".to_string()], "truck");
    objects.extend(typed(&locs, "location"));
    objects.extend(typed(&packages, "package"));
    ProblemInstance {
        name: "logistics-gen".into(),
        domain: "logistics-fond".into(),
        objects,
        init,
        goal: None,
    }
}

pub fn random_instance(kind: DomainKind, rng: &mut impl Rng) -> ProblemInstance {
    match kind {
        DomainKind::Tireworld => tireworld_instance(rng),
        DomainKind::Blocks => blocks_instance(rng),
        DomainKind::Logistics => logistics_instance(rng),
    }
}

/// Atoms that goals may talk about.
pub fn goal_atoms(kind: DomainKind, m: &GroundedFond) -> Vec<Atom> {
    let keep: &[&str] = match kind {
        DomainKind::Tireworld => &["vAt"],
        DomainKind::Blocks => &["on", "ontable", "holding"],
        DomainKind::Logistics => &["at", "in"],
    };
    m.fluents
        .iter()
        .filter(|a| keep.contains(&a.predicate.as_str()))
        .cloned()
        .collect()
}

pub fn random_goal(t: Template, atoms: &[Atom], rng: &mut impl Rng) -> Option<Formula> {
    if atoms.len() < t.arity() {
        return None;
    }
    let picked: Vec<Atom> = atoms.choose_multiple(rng, t.arity()).cloned().collect();
    Some(t.instantiate(&picked))
}

// ---------------------------------------------------------------------------
// datasets

#[derive(Debug, Clone)]
pub struct GeneratedProblem {
    pub dataset: String,
    pub index: usize,
    pub template: Template,
    pub domain: Domain,
    pub problem: ProblemInstance,
    pub goals: Vec<Formula>,
    pub real_goal: usize,
    /// One execution of the hidden goal's policy, observed at 100%.
    pub execution: Vec<ActionLabel>,
}

fn all_satisfy(execs: &[Execution], f: &Formula) -> bool {
    execs.iter().all(|e| evaluate(f, &e.trace))
}

/// True if either goal is met by every execution of the other's policy.
pub fn subsumes_either(a: (&Formula, &GoalAnalysis), b: (&Formula, &GoalAnalysis)) -> bool {
    all_satisfy(&a.1.executions.executions, b.0) || all_satisfy(&b.1.executions.executions, a.0)
}

fn problem_seed(seed: u64, dataset: usize, index: usize) -> u64 {
    seed ^ ((dataset as u64 + 1) << 32) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

const GOAL_ATTEMPTS: usize = 60;
const INSTANCE_ATTEMPTS: usize = 20;

pub fn generate_problem(
    cfg: &DatasetConfig,
    dataset_index: usize,
    index: usize,
    seed: u64,
    opts: &RecognizerOptions,
) -> Result<GeneratedProblem, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(problem_seed(seed, dataset_index, index));
    let template = cfg.templates[index % cfg.templates.len()];
    let domain = cfg.domain.domain();
    let mut opts = *opts;
    opts.parallelism = Parallelism::Sequential;
    for _ in 0..INSTANCE_ATTEMPTS {
        let problem = random_instance(cfg.domain, &mut rng);
        let Ok(base) = fond::ground(&domain, &problem) else {
            continue;
        };
        let atoms = goal_atoms(cfg.domain, &base);
        let mut goals: Vec<(Formula, GoalAnalysis)> = Vec::new();
        let mut tried = BTreeSet::new();
        for _ in 0..GOAL_ATTEMPTS {
            if goals.len() == cfg.goals_per_problem {
                break;
            }
            let Some(g) = random_goal(template, &atoms, &mut rng) else {
                break;
            };
            if !tried.insert(g.to_string()) {
                continue;
            }
            let Ok(a) = analyze_goal(&base, &domain, &problem, &g, &BuiltinPlanner, &opts) else {
                continue;
            };
            if a.executions.is_empty() || a.executions.executions.iter().any(|e| e.actions.is_empty()) {
                continue;
            }
            if goals.iter().any(|(f, b)| subsumes_either((f, b), (&g, &a))) {
                continue;
            }
            goals.push((g, a));
        }
        if goals.len() < cfg.goals_per_problem {
            continue;
        }
        let real_goal = rng.gen_range(0..goals.len());
        let execs = &goals[real_goal].1.executions.executions;
        let execution = execs[rng.gen_range(0..execs.len())].actions.clone();
        return Ok(GeneratedProblem {
            dataset: cfg.name.clone(),
            index,
            template,
            domain,
            problem,
            goals: goals.into_iter().map(|(f, _)| f).collect(),
            real_goal,
            execution,
        });
    }
    Err(BenchError::Generation {
        dataset: cfg.name.clone(),
        index,
        attempts: INSTANCE_ATTEMPTS,
    })
}

/// Order-preserving sample of ⌈level·|e|/100⌉ actions.
pub fn observe(execution: &[ActionLabel], level: u32, rng: &mut impl Rng) -> Vec<ActionLabel> {
    if level >= 100 {
        return execution.to_vec();
    }
    let k = (level as usize * execution.len()).div_ceil(100);
    let mut idx = rand::seq::index::sample(rng, execution.len(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| execution[i].clone()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemLog {
    pub dataset: String,
    pub problem: usize,
    pub template: Template,
    pub level: u32,
    pub goals: Vec<String>,
    pub real_goal: usize,
    pub observations: Vec<String>,
    pub best: Vec<usize>,
    pub scores: Vec<Option<f64>>,
    pub posteriors: Vec<f64>,
    pub planner_calls: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub time_s: Option<f64>,
    pub error: Option<String>,
}

impl ProblemLog {
    /// φ* has the lowest average estimated score (ties allowed).
    pub fn real_goal_is_argmin(&self) -> bool {
        let Some(real) = self.scores.get(self.real_goal).copied().flatten() else {
            return false;
        };
        self.scores.iter().flatten().all(|&s| real <= s)
    }

    /// 0-based rank of φ* by score, counting goals strictly better.
    pub fn real_goal_rank(&self) -> usize {
        let real = self.scores[self.real_goal].unwrap_or(f64::INFINITY);
        self.scores
            .iter()
            .filter(|s| s.unwrap_or(f64::INFINITY) < real)
            .count()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricsRow {
    pub dataset: String,
    pub level: u32,
    pub mean_goals: f64,
    pub mean_obs: f64,
    pub time_s: Option<f64>,
    pub tpr: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub problems: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<MetricsRow>,
    pub problems: Vec<ProblemLog>,
}

fn fmt_num(x: f64) -> String {
    format!("{x:.4}")
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,level,|G|,|Obs|,time_s,tpr,fpr,fnr\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.dataset,
                r.level,
                fmt_num(r.mean_goals),
                fmt_num(r.mean_obs),
                r.time_s.map(fmt_num).unwrap_or_else(|| "NA".into()),
                fmt_num(r.tpr),
                fmt_num(r.fpr),
                fmt_num(r.fnr)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, dataset: &str, level: u32) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.level == level)
    }
}

/// Scores one problem at one observability level.
pub fn evaluate_problem(
    g: &GeneratedProblem,
    level: u32,
    seed: u64,
    dataset_index: usize,
    opts: &RecognizerOptions,
    record_timing: bool,
) -> ProblemLog {
    let mut rng = ChaCha8Rng::seed_from_u64(
        problem_seed(seed, dataset_index, g.index) ^ (u64::from(level) << 48),
    );
    let observations = observe(&g.execution, level, &mut rng);
    let rp = RecognitionProblem {
        domain: g.domain.clone(),
        problem: g.problem.clone(),
        goals: g.goals.clone(),
        observations: observations.clone(),
        priors: None,
        real_goal_index: Some(g.real_goal),
    };
    let start = Instant::now();
    let result = recognize_with(&rp, &BuiltinPlanner, opts);
    let elapsed = start.elapsed().as_secs_f64();
    let n = g.goals.len();
    let mut log = ProblemLog {
        dataset: g.dataset.clone(),
        problem: g.index,
        template: g.template,
        level,
        goals: g.goals.iter().map(|f| f.to_string()).collect(),
        real_goal: g.real_goal,
        observations: observations.iter().map(|o| o.to_string()).collect(),
        best: vec![],
        scores: vec![None; n],
        posteriors: vec![0.0; n],
        planner_calls: 0,
        tpr: 0.0,
        fpr: 0.0,
        time_s: record_timing.then_some(elapsed),
        error: None,
    };
    match result {
        Ok(r) => {
            log.tpr = f64::from(u8::from(r.best.contains(&g.real_goal)));
            let wrong = r.best.iter().filter(|&&i| i != g.real_goal).count();
            log.fpr = if n > 1 { wrong as f64 / (n - 1) as f64 } else { 0.0 };
            log.scores = r.goals.iter().map(|x| x.score).collect();
            log.posteriors = r.goals.iter().map(|x| x.posterior).collect();
            log.planner_calls = r.planner_calls;
            log.best = r.best;
        }
        Err(e) => log.error = Some(e.to_string()),
    }
    log
}

pub fn generate_dataset(
    cfg: &DatasetConfig,
    dataset_index: usize,
    seed: u64,
    opts: &RecognizerOptions,
) -> Result<Vec<GeneratedProblem>, BenchError> {
    let indices: Vec<usize> = (0..cfg.problems).collect();
    par::map(opts.parallelism, &indices, |&i| {
        generate_problem(cfg, dataset_index, i, seed, opts)
    })
    .into_iter()
    .collect()
}

pub fn run(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let opts = RecognizerOptions {
        timeout: Some(std::time::Duration::from_secs_f64(cfg.timeout_s)),
        parallelism: Parallelism::Sequential,
        ..Default::default()
    };
    let gen_opts = RecognizerOptions {
        parallelism: cfg.parallelism,
        ..opts
    };
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for (di, ds) in cfg.datasets.iter().enumerate() {
        let generated = generate_dataset(ds, di, cfg.seed, &gen_opts)?;
        let jobs: Vec<(usize, u32)> = (0..generated.len())
            .flat_map(|p| cfg.levels.iter().map(move |&l| (p, l)))
            .collect();
        let logs = par::map(cfg.parallelism, &jobs, |&(p, level)| {
            evaluate_problem(&generated[p], level, cfg.seed, di, &opts, cfg.record_timing)
        });
        for &level in &cfg.levels {
            let at: Vec<&ProblemLog> = logs.iter().filter(|l| l.level == level).collect();
            let k = at.len().max(1) as f64;
            let mean = |f: &dyn Fn(&ProblemLog) -> f64| at.iter().map(|l| f(l)).sum::<f64>() / k;
            let tpr = mean(&|l| l.tpr);
            rows.push(MetricsRow {
                dataset: ds.name.clone(),
                level,
                mean_goals: mean(&|l| l.goals.len() as f64),
                mean_obs: mean(&|l| l.observations.len() as f64),
                time_s: cfg
                    .record_timing
                    .then(|| mean(&|l| l.time_s.unwrap_or(0.0))),
                tpr,
                fpr: mean(&|l| l.fpr),
                fnr: 1.0 - tpr,
                problems: at.len(),
            });
        }
        problems.extend(logs);
    }
    Ok(BenchReport {
        seed: cfg.seed,
        rows,
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> ActionLabel {
        s.parse().unwrap()
    }

    #[test]
    fn observation_counts_use_the_ceiling() {
        let e = vec![l("(a)"), l("(b)"), l("(c)")];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(observe(&e, 10, &mut rng).len(), 1);
        assert_eq!(observe(&e, 50, &mut rng).len(), 2);
        assert_eq!(observe(&e, 100, &mut rng), e);
    }

    #[test]
    fn observations_preserve_order() {
        let e: Vec<ActionLabel> = (0..20).map(|i| l(&format!("(a{i:02})"))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = observe(&e, 30, &mut rng);
        assert_eq!(o.len(), 6);
        assert!(o.windows(2).all(|w| w[0] < w[1]));
        let mut again = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(observe(&e, 30, &mut again), o);
    }

    #[test]
    fn templates_have_the_right_dialect() {
        use crate::logic::Dialect;
        let p: Vec<Atom> = ["a", "b", "c"].iter().map(|s| Atom::prop(*s)).collect();
        for t in Template::ALL {
            let f = t.instantiate(&p);
            let expected = if matches!(t, Template::Once | Template::Since) {
                Dialect::Pltlf
            } else {
                Dialect::Ltlf
            };
            assert_eq!(f.dialect().unwrap(), expected, "{t:?}");
        }
    }

    #[test]
    fn generators_ground() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [DomainKind::Tireworld, DomainKind::Blocks, DomainKind::Logistics] {
            let d = kind.domain();
            let p = random_instance(kind, &mut rng);
            let m = fond::ground(&d, &p).unwrap();
            assert!(!goal_atoms(kind, &m).is_empty());
            assert!(!m.applicable(&m.initial).is_empty(), "{kind:?}");
        }
    }

    #[test]
    fn small_run_is_deterministic_and_consistent() {
        let mut cfg = BenchConfig::standard(5);
        for d in &mut cfg.datasets {
            d.problems = 2;
        }
        cfg.levels = vec![10, 100];
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
        for r in &a.rows {
            assert!((r.tpr + r.fnr - 1.0).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&r.fpr));
        }
        for p in &a.problems {
            assert_eq!(p.planner_calls, p.goals.len());
        }
        assert!(a.to_csv().lines().nth(1).unwrap().contains(",NA,"));
    }

    #[test]
    fn bad_configs_are_rejected() {
        let mut cfg = BenchConfig::standard(0);
        cfg.levels.clear();
        assert!(run(&cfg).is_err());
        let mut cfg = BenchConfig::standard(0);
        cfg.levels = vec![0];
        assert!(cfg.validate().is_err());
    }
}
