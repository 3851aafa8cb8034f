//! Goal recognition: per-goal compile, solve and enumerate, then score the
//! observations against every goal's executions.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::AutomatonOptions;
use crate::compile::{compile_with_base, CompileError};
use crate::executions::{
    average_distances, enumerate_executions, DistanceTable, EnumerationOptions, ExecutionSet,
};
use crate::fond::{self, ActionLabel, Domain, GroundedFond, PddlError, ProblemInstance};
use crate::logic::{parse_formula, Formula, FormulaError};
use crate::par::{self, Parallelism};
use crate::planner::{BuiltinPlanner, CountingPlanner, PlanOptions, Planner};

/// Relative tolerance for ties in the posterior.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RecognitionError {
    #[error("no candidate goals")]
    NoGoals,
    #[error("no observations")]
    NoObservations,
    #[error("observed action {0} is not a ground action of the instance")]
    UnknownObservation(String),
    #[error("expected {expected} priors, got {got}")]
    PriorCount { expected: usize, got: usize },
    #[error("priors must be non-negative with a positive sum")]
    InvalidPriors,
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error("goal {index}: {source}")]
    Formula {
        index: usize,
        #[source]
        source: FormulaError,
    },
    #[error("bundle: {0}")]
    Bundle(String),
}

#[derive(Debug, Clone)]
pub struct RecognitionProblem {
    pub domain: Domain,
    pub problem: ProblemInstance,
    pub goals: Vec<Formula>,
    pub observations: Vec<ActionLabel>,
    /// Uniform when absent.
    pub priors: Option<Vec<f64>>,
    /// Only used for evaluation.
    pub real_goal_index: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct RecognizerOptions {
    pub automaton: AutomatonOptions,
    pub max_states: usize,
    pub timeout: Option<Duration>,
    pub enumeration: EnumerationOptions,
    pub parallelism: Parallelism,
}

impl Default for RecognizerOptions {
    fn default() -> Self {
        RecognizerOptions {
            automaton: AutomatonOptions::default(),
            max_states: PlanOptions::default().max_states,
            timeout: None,
            enumeration: EnumerationOptions::default(),
            parallelism: Parallelism::available(),
        }
    }
}

/// What the recognizer learns about one goal before seeing observations.
#[derive(Debug, Clone)]
pub struct GoalAnalysis {
    pub executions: ExecutionSet,
    pub distances: DistanceTable,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GoalReport {
    pub name: String,
    pub formula: String,
    pub executions: Option<usize>,
    /// Per-observation estimated scores.
    pub pairwise: Vec<f64>,
    pub penalties: Vec<u8>,
    /// Average estimated score; absent when the goal failed.
    pub score: Option<f64>,
    pub likelihood: f64,
    pub posterior: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Timing {
    pub analysis_s: f64,
    pub scoring_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecognitionResult {
    pub goals: Vec<GoalReport>,
    /// Indices of the goals with maximal posterior.
    pub best: Vec<usize>,
    pub best_names: Vec<String>,
    pub planner_calls: usize,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

pub fn goal_name(i: usize) -> String {
    format!("phi{i}")
}

/// 1 if no execution has `prev` somewhere before `cur`; 0 otherwise.
pub fn penalty(prev: Option<&ActionLabel>, cur: &ActionLabel, e: &ExecutionSet) -> u8 {
    match prev {
        None => 0,
        Some(p) => u8::from(!e.has_order(p, cur)),
    }
}

/// e^p · d(o, φ) / Σ over all goals of d(o, φ′); 0 if the sum vanishes.
pub fn pairwise_score(penalty: u8, o: &ActionLabel, goal: usize, tables: &[DistanceTable]) -> f64 {
    let denom: f64 = tables.iter().map(|t| t.d(o)).sum();
    if denom == 0.0 {
        return 0.0;
    }
    f64::from(penalty).exp() * tables[goal].d(o) / denom
}

pub fn average_score(pairwise: &[f64]) -> Option<f64> {
    if pairwise.is_empty() {
        None
    } else {
        Some(pairwise.iter().sum::<f64>() / pairwise.len() as f64)
    }
}

pub fn likelihood(score: f64) -> f64 {
    1.0 / (1.0 + score)
}

/// η · P(Obs|φ) · P(φ). Falls back to uniform when every product is 0; the
/// flag reports that case.
pub fn posterior(likelihoods: &[f64], priors: &[f64]) -> (Vec<f64>, bool) {
    let joint: Vec<f64> = likelihoods.iter().zip(priors).map(|(l, p)| l * p).collect();
    let total: f64 = joint.iter().sum();
    if total > 0.0 {
        (joint.iter().map(|j| j / total).collect(), false)
    } else {
        let n = likelihoods.len() as f64;
        (vec![1.0 / n; likelihoods.len()], true)
    }
}

/// Indices within [`TIE_TOLERANCE`] of the maximum.
pub fn argmax_set(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len())
        .filter(|&i| max - values[i] <= TIE_TOLERANCE * max.abs())
        .collect()
}

/// Compiles, solves and enumerates one goal.
pub fn analyze_goal(
    base: &GroundedFond,
    domain: &Domain,
    problem: &ProblemInstance,
    goal: &Formula,
    planner: &dyn Planner,
    opts: &RecognizerOptions,
) -> Result<GoalAnalysis, String> {
    let aug = compile_with_base(base, domain, problem, goal, &opts.automaton)
        .map_err(|e: CompileError| e.to_string())?;
    let plan_opts = PlanOptions {
        max_states: opts.max_states,
        deadline: opts.timeout.map(|t| Instant::now() + t),
    };
    let policy = planner.solve(&aug, &plan_opts).map_err(|e| e.to_string())?;
    let executions =
        enumerate_executions(&aug, &policy, &opts.enumeration).map_err(|e| e.to_string())?;
    let distances = average_distances(&executions);
    Ok(GoalAnalysis {
        executions,
        distances,
    })
}

pub fn recognize(rp: &RecognitionProblem, opts: &RecognizerOptions) -> Result<RecognitionResult, RecognitionError> {
    recognize_with(rp, &BuiltinPlanner, opts)
}

pub fn recognize_with(
    rp: &RecognitionProblem,
    planner: &dyn Planner,
    opts: &RecognizerOptions,
) -> Result<RecognitionResult, RecognitionError> {
    let start = Instant::now();
    let n = rp.goals.len();
    if n == 0 {
        return Err(RecognitionError::NoGoals);
    }
    if rp.observations.is_empty() {
        return Err(RecognitionError::NoObservations);
    }
    let priors = match &rp.priors {
        None => vec![1.0 / n as f64; n],
        Some(p) if p.len() != n => {
            return Err(RecognitionError::PriorCount {
                expected: n,
                got: p.len(),
            })
        }
        Some(p) if p.iter().any(|&x| x < 0.0 || !x.is_finite()) || p.iter().sum::<f64>() <= 0.0 => {
            return Err(RecognitionError::InvalidPriors)
        }
        Some(p) => p.clone(),
    };
    let base = fond::ground(&rp.domain, &rp.problem)?;
    for o in &rp.observations {
        if base.action(o).is_none() {
            return Err(RecognitionError::UnknownObservation(o.to_string()));
        }
    }

    let counter = CountingPlanner::new(planner);
    let analyses: Vec<Result<GoalAnalysis, String>> = par::map(opts.parallelism, &rp.goals, |g| {
        analyze_goal(&base, &rp.domain, &rp.problem, g, &counter, opts)
    });
    let analysis_s = start.elapsed().as_secs_f64();
    let scoring_start = Instant::now();

    let empty = GoalAnalysis {
        executions: ExecutionSet::default(),
        distances: DistanceTable::default(),
    };
    let tables: Vec<DistanceTable> = analyses
        .iter()
        .map(|a| a.as_ref().unwrap_or(&empty).distances.clone())
        .collect();

    let mut reports = Vec::with_capacity(n);
    let mut likelihoods = Vec::with_capacity(n);
    for (i, a) in analyses.iter().enumerate() {
        let mut report = GoalReport {
            name: goal_name(i),
            formula: rp.goals[i].to_string(),
            executions: None,
            pairwise: vec![],
            penalties: vec![],
            score: None,
            likelihood: 0.0,
            posterior: 0.0,
            error: None,
        };
        match a {
            Ok(a) => {
                for (k, o) in rp.observations.iter().enumerate() {
                    let prev = k.checked_sub(1).map(|j| &rp.observations[j]);
                    let p = penalty(prev, o, &a.executions);
                    report.penalties.push(p);
                    report.pairwise.push(pairwise_score(p, o, i, &tables));
                }
                let e = average_score(&report.pairwise).expect("observations are non-empty");
                report.executions = Some(a.executions.len());
                report.score = Some(e);
                report.likelihood = likelihood(e);
            }
            Err(msg) => report.error = Some(msg.clone()),
        }
        likelihoods.push(report.likelihood);
        reports.push(report);
    }

    let mut warnings = Vec::new();
    let (post, fallback) = posterior(&likelihoods, &priors);
    if fallback {
        warnings.push("all likelihoods are zero; using a uniform posterior".to_string());
    }
    for (r, p) in reports.iter_mut().zip(&post) {
        r.posterior = *p;
    }
    let best = argmax_set(&post);
    Ok(RecognitionResult {
        best_names: best.iter().map(|&i| goal_name(i)).collect(),
        best,
        goals: reports,
        planner_calls: counter.calls(),
        warnings,
        timing: Timing {
            analysis_s,
            scoring_s: scoring_start.elapsed().as_secs_f64(),
            total_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// On-disk description of a recognition problem. Paths are relative to the
/// bundle file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bundle {
    pub domain: PathBuf,
    pub problem: PathBuf,
    pub goals: Vec<String>,
    pub obs: Vec<String>,
    #[serde(default)]
    pub real_goal_index: Option<usize>,
    #[serde(default)]
    pub priors: Option<Vec<f64>>,
}

/// Loads a bundle from a JSON file, or from `bundle.json` in a directory.
pub fn load_bundle(path: &Path) -> Result<RecognitionProblem, RecognitionError> {
    let file = if path.is_dir() {
        path.join("bundle.json")
    } else {
        path.to_path_buf()
    };
    let io = |p: &Path, e: std::io::Error| RecognitionError::Bundle(format!("{}: {e}", p.display()));
    let text = std::fs::read_to_string(&file).map_err(|e| io(&file, e))?;
    let bundle: Bundle =
        serde_json::from_str(&text).map_err(|e| RecognitionError::Bundle(e.to_string()))?;
    let dir = file.parent().unwrap_or(Path::new("."));
    let dpath = dir.join(&bundle.domain);
    let ppath = dir.join(&bundle.problem);
    let dtext = std::fs::read_to_string(&dpath).map_err(|e| io(&dpath, e))?;
    let ptext = std::fs::read_to_string(&ppath).map_err(|e| io(&ppath, e))?;
    problem_from_texts(&dtext, &ptext, &bundle)
}

pub fn problem_from_texts(
    domain: &str,
    problem: &str,
    bundle: &Bundle,
) -> Result<RecognitionProblem, RecognitionError> {
    let domain = fond::parse_domain(domain)?;
    let problem = fond::parse_problem(problem, &domain)?;
    let goals = bundle
        .goals
        .iter()
        .enumerate()
        .map(|(index, g)| parse_formula(g).map_err(|source| RecognitionError::Formula { index, source }))
        .collect::<Result<_, _>>()?;
    let observations = bundle
        .obs
        .iter()
        .map(|o| o.parse::<ActionLabel>())
        .collect::<Result<_, _>>()?;
    Ok(RecognitionProblem {
        domain,
        problem,
        goals,
        observations,
        priors: bundle.priors.clone(),
        real_goal_index: bundle.real_goal_index,
    })
}
