use std::collections::{HashSet, VecDeque};

use fondgr::bench::{self, DomainKind, Template};
use fondgr::compile::{compile_goal, compile_with_base, AugmentedProblem, EmitMode};
use fondgr::data;
use fondgr::executions::{average_distances, enumerate_executions, EnumerationOptions};
use fondgr::fond::{self, parse_domain, parse_problem, State};
use fondgr::logic::{evaluate, parse_formula};
use fondgr::planner::{verify_policy, BuiltinPlanner, PlanOptions, Planner, Policy};
use fondgr::recognizer::{problem_from_texts, recognize, Bundle, RecognizerOptions};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tireworld() -> (fond::Domain, fond::ProblemInstance) {
    let d = parse_domain(data::TIREWORLD_DOMAIN).unwrap();
    let p = parse_problem(data::TIREWORLD_GRID, &d).unwrap();
    (d, p)
}

fn reachable(aug: &AugmentedProblem, cap: usize) -> Vec<State> {
    let m = &aug.model;
    let mut seen = HashSet::from([m.initial.clone()]);
    let mut queue = VecDeque::from([m.initial.clone()]);
    let mut out = vec![];
    while let Some(s) = queue.pop_front() {
        if out.len() >= cap {
            break;
        }
        for a in m.applicable(&s) {
            for n in m.successors(&s, a).unwrap() {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        out.push(s);
    }
    out
}

/// A solvable random goal over a random instance: (domain, problem, goal).
fn random_task(kind: DomainKind, t: Template, seed: u64) -> Option<AugmentedProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = kind.domain();
    let p = bench::random_instance(kind, &mut rng);
    let base = fond::ground(&d, &p).ok()?;
    let atoms = bench::goal_atoms(kind, &base);
    let g = bench::random_goal(t, &atoms, &mut rng)?;
    compile_with_base(&base, &d, &p, &g, &Default::default()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn automaton_fluents_are_exclusive(seed in 0u64..10_000, ti in 0usize..6, blocks in any::<bool>()) {
        let kind = if blocks { DomainKind::Blocks } else { DomainKind::Tireworld };
        let aug = random_task(kind, Template::ALL[ti], seed).unwrap();
        for s in reachable(&aug, 5_000) {
            if s.contains(aug.turn) {
                prop_assert!(aug.automaton_state(&s).is_some());
            }
        }
    }

    #[test]
    fn executions_satisfy_their_goal(seed in 0u64..10_000, ti in 0usize..6, blocks in any::<bool>()) {
        let kind = if blocks { DomainKind::Blocks } else { DomainKind::Tireworld };
        let aug = random_task(kind, Template::ALL[ti], seed).unwrap();
        let Ok(policy) = BuiltinPlanner.solve(&aug, &PlanOptions::default()) else {
            return Ok(());
        };
        let goal = aug.model.goal.clone().unwrap();
        let report = verify_policy(&aug.model, &goal, &policy);
        prop_assert!(report.closed && report.strong_cyclic);
        let e = enumerate_executions(&aug, &policy, &EnumerationOptions::default()).unwrap();
        for x in &e.executions {
            prop_assert!(evaluate(&aug.formula, &x.trace), "{} on {:?}", aug.formula, x.actions);
            prop_assert!(aug.automaton.accepts(&x.trace));
        }
    }

    #[test]
    fn emitted_pddl_round_trips(seed in 0u64..10_000, ti in 0usize..6) {
        let aug = random_task(DomainKind::Tireworld, Template::ALL[ti], seed).unwrap();
        prop_assert!(aug.check_round_trip(EmitMode::Grounded, 20_000).unwrap());
        prop_assert!(aug.check_round_trip(EmitMode::Parametric, 20_000).unwrap());
    }
}

#[test]
fn executions_replay_in_the_base_model() {
    let (d, p) = tireworld();
    let base = fond::ground(&d, &p).unwrap();
    for g in data::GRID_GOALS {
        let aug = compile_goal(&d, &p, &parse_formula(g).unwrap()).unwrap();
        let pol = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let e = enumerate_executions(&aug, &pol, &EnumerationOptions::default()).unwrap();
        for x in &e.executions {
            let mut s = base.initial.clone();
            assert_eq!(base.state_atoms(&s), x.trace.steps[0]);
            for (i, a) in x.actions.iter().enumerate() {
                let ai = base.action(a).unwrap();
                let next = base.successors(&s, ai).unwrap();
                s = next
                    .into_iter()
                    .find(|n| base.state_atoms(n) == x.trace.steps[i + 1])
                    .expect("trace follows an outcome");
            }
        }
    }
}

#[test]
fn distances_ignore_extra_loop_iterations() {
    let (d, p) = tireworld();
    for g in ["F vAt_22", "F vAt_51", "F vAt_33", "F vAt_15"] {
        let aug = compile_goal(&d, &p, &parse_formula(g).unwrap()).unwrap();
        let pol = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let once = enumerate_executions(&aug, &pol, &EnumerationOptions::default()).unwrap();
        let twice = enumerate_executions(
            &aug,
            &pol,
            &EnumerationOptions {
                loop_bound: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(average_distances(&once), average_distances(&twice), "{g}");
    }
}

#[test]
fn blocks_loops_are_entered_at_most_once() {
    // a failing pick-up loops on its own state
    let d = parse_domain(data::BLOCKS_DOMAIN).unwrap();
    let p = parse_problem(data::BLOCKS_PROBLEM, &d).unwrap();
    let aug = compile_goal(&d, &p, &parse_formula("F (holding c)").unwrap()).unwrap();
    let pol = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
    let e = enumerate_executions(&aug, &pol, &EnumerationOptions::default()).unwrap();
    let seqs: Vec<String> = e
        .executions
        .iter()
        .map(|x| x.actions.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(seqs, vec!["(pick-up c)", "(pick-up c) (pick-up c)"]);
}

fn weak_plan_length(aug: &AugmentedProblem) -> usize {
    let m = &aug.model;
    let goal = m.goal.clone().unwrap();
    let mut dist = std::collections::HashMap::from([(m.initial.clone(), 0usize)]);
    let mut queue = VecDeque::from([m.initial.clone()]);
    while let Some(s) = queue.pop_front() {
        let k = dist[&s];
        if goal.holds(&s) {
            return k;
        }
        for a in m.applicable(&s) {
            let cost = usize::from(!aug.is_trans(a));
            for n in m.successors(&s, a).unwrap() {
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), k + cost);
                    queue.push_back(n);
                }
            }
        }
    }
    unreachable!("solvable")
}

#[test]
fn shortest_execution_is_an_optimal_weak_plan() {
    let (d, p) = tireworld();
    for g in ["F vAt_22", "F vAt_51", "F vAt_33", "F vAt_15", "F (vAt_21 & X F vAt_23)"] {
        let aug = compile_goal(&d, &p, &parse_formula(g).unwrap()).unwrap();
        let pol = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
        let e = enumerate_executions(&aug, &pol, &EnumerationOptions::default()).unwrap();
        let shortest = e.executions.iter().map(|x| x.actions.len()).min().unwrap();
        assert_eq!(shortest, weak_plan_length(&aug), "{g}");
    }
}

#[test]
fn bundled_classical_instances_have_verified_policies() {
    for (dt, pt) in [
        (data::BLOCKS_DOMAIN, data::BLOCKS_PROBLEM),
        (data::LOGISTICS_DOMAIN, data::LOGISTICS_PROBLEM),
    ] {
        let d = parse_domain(dt).unwrap();
        let p = parse_problem(pt, &d).unwrap();
        let m = fond::ground(&d, &p).unwrap();
        let g = m.goal.clone().unwrap();
        let pol = fondgr::planner::solve_strong_cyclic(&m, &g, &PlanOptions::default()).unwrap();
        let r = verify_policy(&m, &g, &pol);
        assert!(r.closed && r.strong_cyclic, "{}", d.name);
        assert_eq!(Policy::from_text(&m, &pol.to_text(&m)).unwrap(), pol);
    }
}

fn grid(priors: Option<Vec<f64>>) -> fondgr::recognizer::RecognitionProblem {
    let bundle = Bundle {
        domain: "".into(),
        problem: "".into(),
        goals: data::GRID_GOALS.iter().map(|s| s.to_string()).collect(),
        obs: data::GRID_OBS.iter().map(|s| s.to_string()).collect(),
        real_goal_index: Some(1),
        priors,
    };
    problem_from_texts(data::TIREWORLD_DOMAIN, data::TIREWORLD_GRID, &bundle).unwrap()
}

#[test]
fn argmax_is_stable_under_prior_scaling() {
    let opts = RecognizerOptions::default();
    let base = recognize(&grid(None), &opts).unwrap();
    for k in [0.001, 1.0, 7.5, 1e6] {
        let r = recognize(&grid(Some(vec![k; 3])), &opts).unwrap();
        assert_eq!(r.best, base.best);
        let total: f64 = r.goals.iter().map(|g| g.posterior).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn sequential_and_parallel_recognition_agree() {
    use fondgr::par::Parallelism;
    let run = |parallelism| {
        let opts = RecognizerOptions {
            parallelism,
            ..Default::default()
        };
        let mut r = recognize(&grid(None), &opts).unwrap();
        r.timing.analysis_s = 0.0;
        r.timing.scoring_s = 0.0;
        r.timing.total_s = 0.0;
        r
    };
    assert_eq!(run(Parallelism::Sequential), run(Parallelism::Parallel));
}

#[test]
fn real_goal_rank_improves_with_observability() {
    let report = bench::run(&bench::BenchConfig::standard(1)).unwrap();
    let mut total = 0;
    let mut better = 0;
    for low in report.problems.iter().filter(|p| p.level == 10) {
        for high in report.problems.iter().filter(|p| {
            p.level >= 70 && p.dataset == low.dataset && p.problem == low.problem
        }) {
            total += 1;
            better += usize::from(high.real_goal_rank() <= low.real_goal_rank());
        }
    }
    let share = better as f64 / total as f64;
    assert!(share >= 0.9, "rank held or improved on {better}/{total}");
}

#[test]
fn external_planner_reads_policies_and_status() {
    use fondgr::planner::{planner_from_spec, PlanError};
    use std::time::{Duration, Instant};
    let (d, p) = tireworld();
    let aug = compile_goal(&d, &p, &parse_formula("F vAt_22").unwrap()).unwrap();
    let builtin = BuiltinPlanner.solve(&aug, &PlanOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("policy.txt");
    std::fs::write(&file, builtin.to_text(&aug.model)).unwrap();

    let cat = planner_from_spec(&format!("exec:cat '{}' #", file.display())).unwrap();
    assert_eq!(cat.solve(&aug, &PlanOptions::default()).unwrap(), builtin);

    let fails = planner_from_spec("exec:exit 2 #").unwrap();
    assert!(matches!(fails.solve(&aug, &PlanOptions::default()), Err(PlanError::Unsolvable)));

    let slow = planner_from_spec("exec:sleep 5 #").unwrap();
    let opts = PlanOptions {
        deadline: Some(Instant::now() + Duration::from_millis(100)),
        ..Default::default()
    };
    assert!(matches!(slow.solve(&aug, &opts), Err(PlanError::Timeout)));
}
